use std::cmp::Ordering;
use std::fmt;

/// Largest variable index a monomial can carry.
pub const MAX_VARS: u32 = 32;
/// Largest total x-degree a monomial can carry.
pub const MAX_XDEG: u32 = 15;

/// `t^a * x_1^{e_1} * ... * x_D^{e_D}`.
///
/// Exponents of the x variables are packed four bits each into a `u128`,
/// variable 1 in the most significant nibble. Every exponent is bounded by
/// the total x-degree, which is capped at [`MAX_XDEG`], so packed addition
/// never carries between nibbles. With this layout, comparing sorted index
/// lists of equal length is the reverse of comparing the packed words.
fn shift(i: u32) -> u32 {
    4 * (MAX_VARS - i)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    t: u32,
    xdeg: u32,
    packed: u128,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { t: 0, xdeg: 0, packed: 0 };

    pub fn t_pow(t: u32) -> Self {
        Monomial { t, xdeg: 0, packed: 0 }
    }

    /// Builds `t^t * prod x_i^{m}` from `(i, m)` pairs. Repeated indices add up.
    ///
    /// Panics if an index is outside `1..=MAX_VARS` or the x-degree exceeds
    /// [`MAX_XDEG`].
    pub fn new(t: u32, xs: &[(u32, u32)]) -> Self {
        let mut m = Monomial::t_pow(t);
        for &(i, e) in xs {
            assert!((1..=MAX_VARS).contains(&i), "variable index {i} out of range");
            m.xdeg += e;
            assert!(m.xdeg <= MAX_XDEG, "x-degree above {MAX_XDEG}");
            m.packed += (e as u128) << shift(i);
        }
        m
    }

    /// Monomial from a multiset of variable indices, e.g. `[1, 1, 3]` for `x1^2 x3`.
    pub fn from_indices(t: u32, indices: &[u32]) -> Self {
        let pairs: Vec<(u32, u32)> = indices.iter().map(|&i| (i, 1)).collect();
        Monomial::new(t, &pairs)
    }

    pub fn t_exp(&self) -> u32 {
        self.t
    }

    pub fn x_degree(&self) -> u32 {
        self.xdeg
    }

    pub fn exponent(&self, i: u32) -> u32 {
        if i == 0 || i > MAX_VARS {
            return 0;
        }
        ((self.packed >> shift(i)) & 0xf) as u32
    }

    /// Largest variable index with a nonzero exponent (0 for none).
    pub fn max_index(&self) -> u32 {
        if self.packed == 0 {
            0
        } else {
            MAX_VARS - self.packed.trailing_zeros() / 4
        }
    }

    /// `(index, exponent)` pairs with nonzero exponent, by increasing index.
    pub fn x_exps(&self) -> Vec<(u32, u32)> {
        (1..=self.max_index())
            .filter_map(|i| {
                let e = self.exponent(i);
                (e > 0).then_some((i, e))
            })
            .collect()
    }

    /// The x part as a sorted multiset of indices.
    pub fn indices(&self) -> Vec<u32> {
        self.x_exps()
            .into_iter()
            .flat_map(|(i, e)| std::iter::repeat_n(i, e as usize))
            .collect()
    }

    pub fn x_part(&self) -> Monomial {
        Monomial { t: 0, ..*self }
    }

    pub fn with_t(&self, t: u32) -> Monomial {
        Monomial { t, ..*self }
    }

    /// Product, or `None` if the x-degree would exceed [`MAX_XDEG`].
    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        let xdeg = self.xdeg + other.xdeg;
        if xdeg > MAX_XDEG {
            return None;
        }
        Some(Monomial { t: self.t + other.t, xdeg, packed: self.packed + other.packed })
    }
}

/// Ordered by t-exponent, then total x-degree, then the sorted index list
/// lexicographically. This is the rendering order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.t
            .cmp(&other.t)
            .then(self.xdeg.cmp(&other.xdeg))
            .then(other.packed.cmp(&self.packed))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{}", self.t)?;
        for (i, e) in self.x_exps() {
            write!(f, " x{i}^{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
