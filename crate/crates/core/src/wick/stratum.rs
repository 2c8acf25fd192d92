//! Strata of the two-string diagonal.

use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::chop::diagonal::{solve2, strings_disjoint};
use crate::minkowski::ExactVector;
use crate::order::StringGeom;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stratum {
    OffDiagonal,
    /// Equal base points.
    Delta2_0,
    /// The base of the second string lies in the interior of the first.
    Delta2_1a,
    /// The base of the first string lies in the interior of the second.
    Delta2_1b,
    /// Independent directions crossing at interior points.
    Delta2_2,
}

impl Stratum {
    pub fn codimension(self) -> Option<u32> {
        match self {
            Stratum::OffDiagonal => None,
            Stratum::Delta2_2 => Some(2),
            Stratum::Delta2_1a | Stratum::Delta2_1b => Some(3),
            Stratum::Delta2_0 => Some(4),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Stratum::OffDiagonal => "OffDiagonal",
            Stratum::Delta2_0 => "Delta2_0",
            Stratum::Delta2_1a => "Delta2_1a",
            Stratum::Delta2_1b => "Delta2_1b",
            Stratum::Delta2_2 => "Delta2_2",
        }
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `r > 0` with `to = from + r dir`.
fn on_open_ray(from: &ExactVector, dir: &ExactVector, to: &ExactVector) -> bool {
    let d = to - from;
    !d.is_zero() && matches!(dir.ratio_to(&d), Some(r) if r.is_positive())
}

pub fn stratum(x: &ExactVector, e: &ExactVector, xp: &ExactVector, ep: &ExactVector) -> Stratum {
    if x == xp {
        return Stratum::Delta2_0;
    }
    if on_open_ray(x, e, xp) {
        return Stratum::Delta2_1a;
    }
    if on_open_ray(xp, ep, x) {
        return Stratum::Delta2_1b;
    }
    if !e.is_parallel(ep) {
        // x + r e = x' + r' e'
        if let Some((r, rp)) = solve2(e, &-ep, &(xp - x)) {
            if r.is_positive() && rp.is_positive() {
                return Stratum::Delta2_2;
            }
        }
    }
    Stratum::OffDiagonal
}

pub fn string_stratum(s: &StringGeom, sp: &StringGeom) -> Stratum {
    let st = stratum(&s.base, &s.dir, &sp.base, &sp.dir);
    debug_assert_eq!(st == Stratum::OffDiagonal, strings_disjoint(s, sp));
    st
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> ExactVector {
        ExactVector::from_ints(c)
    }

    #[test]
    fn examples() {
        let e = v(&[0, 1, 0, 0]);
        let ep = v(&[0, 0, 1, 0]);
        assert_eq!(stratum(&v(&[0, 0, 0, 0]), &e, &v(&[0, 0, 0, 0]), &ep), Stratum::Delta2_0);
        assert_eq!(stratum(&v(&[0, 0, 0, 0]), &e, &v(&[0, 2, 0, 0]), &ep), Stratum::Delta2_1a);
        assert_eq!(stratum(&v(&[0, 2, 0, 0]), &ep, &v(&[0, 0, 0, 0]), &e), Stratum::Delta2_1b);
        assert_eq!(stratum(&v(&[0, 0, 0, 0]), &e, &v(&[0, 1, -1, 0]), &ep), Stratum::Delta2_2);
        assert_eq!(stratum(&v(&[2, 0, 0, 1]), &v(&[-3, 0, 5, 0]), &v(&[0, 0, 0, 0]), &ep), Stratum::OffDiagonal);
    }

    #[test]
    fn codimensions() {
        assert_eq!(Stratum::Delta2_2.codimension(), Some(2));
        assert_eq!(Stratum::Delta2_1a.codimension(), Some(3));
        assert_eq!(Stratum::Delta2_1b.codimension(), Some(3));
        assert_eq!(Stratum::Delta2_0.codimension(), Some(4));
        assert_eq!(Stratum::OffDiagonal.codimension(), None);
    }
}
