use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::poly::{bracket, ProjPoint1};

const VANISH: f64 = 1e-13;

/// A cross-ratio kept as numerator/denominator so that ∞ is explicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossRatio {
    pub num: C64,
    pub den: C64,
}

impl CrossRatio {
    pub fn is_infinite(&self) -> bool {
        self.den.norm() <= VANISH * self.num.norm()
    }

    /// Finite value, or None at ∞.
    pub fn value(&self) -> Option<C64> {
        if self.is_infinite() {
            None
        } else {
            Some(self.num / self.den)
        }
    }
}

/// (a,b;u,v) = [a,u][b,v] / ([a,v][b,u]).
pub fn cross_ratio(
    a: &ProjPoint1,
    b: &ProjPoint1,
    u: &ProjPoint1,
    v: &ProjPoint1,
) -> Result<CrossRatio> {
    let au = bracket(a, u);
    let bv = bracket(b, v);
    let av = bracket(a, v);
    let bu = bracket(b, u);
    let zero = |z: C64| z.norm() < VANISH;
    if (zero(au) && zero(av)) || (zero(bv) && zero(bu)) {
        return Err(Error::Indeterminate);
    }
    Ok(CrossRatio {
        num: au * bv,
        den: av * bu,
    })
}

/// Finite cross-ratio value, treating ∞ as indeterminate.
pub fn cross_ratio_value(
    a: &ProjPoint1,
    b: &ProjPoint1,
    u: &ProjPoint1,
    v: &ProjPoint1,
) -> Result<C64> {
    cross_ratio(a, b, u, v)?.value().ok_or(Error::Indeterminate)
}
