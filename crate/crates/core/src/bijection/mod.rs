//! Bijections between maps, mobiles, forests of mobiles and blossoming
//! trees.

mod aggregate;
mod bdg;
mod blossoming;

pub use aggregate::{aggregate, disaggregate, Disaggregated};
pub use bdg::{bdg_forward, bdg_forward_rooted};
pub use blossoming::{blossoming_to_mobile, mobile_to_blossoming};
