//! Exact intersection tests for strings and their pieces.

use num_traits::{Signed, Zero};

use crate::feasibility::Domain;
use crate::minkowski::ExactVector;
use crate::order::{Region, StringGeom};
use crate::rational::Rational;

/// Closed interval with optional infinite ends.
#[derive(Debug, Clone)]
struct Interval {
    lo: Option<Rational>,
    hi: Option<Rational>,
}

impl Interval {
    fn of(d: &Domain) -> Self {
        Interval {
            lo: Some(d.lower().clone()),
            hi: d.upper().cloned(),
        }
    }

    fn contains(&self, x: &Rational) -> bool {
        self.lo.as_ref().map_or(true, |l| x >= l) && self.hi.as_ref().map_or(true, |h| x <= h)
    }

    /// Image under `x -> k + mu x`.
    fn affine(&self, k: &Rational, mu: &Rational) -> Self {
        let map = |x: &Option<Rational>| x.as_ref().map(|x| k + mu * x);
        if mu.is_negative() {
            Interval { lo: map(&self.hi), hi: map(&self.lo) }
        } else {
            Interval { lo: map(&self.lo), hi: map(&self.hi) }
        }
    }

    fn meets(&self, other: &Self) -> bool {
        let lo = match (&self.lo, &other.lo) {
            (Some(a), Some(b)) => Some(a.max(b).clone()),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        let hi = match (&self.hi, &other.hi) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        match (lo, hi) {
            (Some(l), Some(h)) => l <= h,
            _ => true,
        }
    }
}

/// Unique `(s, t)` with `s a + t b = r` for linearly independent `a`, `b`.
pub(crate) fn solve2(a: &ExactVector, b: &ExactVector, r: &ExactVector) -> Option<(Rational, Rational)> {
    let n = a.dim();
    for i in 0..n {
        for j in i + 1..n {
            let det = &a[i] * &b[j] - &a[j] * &b[i];
            if det.is_zero() {
                continue;
            }
            let s = (&r[i] * &b[j] - &r[j] * &b[i]) / &det;
            let t = (&a[i] * &r[j] - &a[j] * &r[i]) / &det;
            let fits = (0..n).all(|k| &s * &a[k] + &t * &b[k] == r[k]);
            return fits.then_some((s, t));
        }
    }
    None
}

/// Parameter `s` with `p = x + s e`, if `p` lies on the line.
fn line_param(x: &ExactVector, e: &ExactVector, p: &ExactVector) -> Option<Rational> {
    let r = p - x;
    if r.is_zero() {
        return Some(Rational::zero());
    }
    e.ratio_to(&r)
}

pub fn regions_intersect(r1: &Region, r2: &Region) -> bool {
    let (x1, e1, d1) = r1.parametrize();
    let (x2, e2, d2) = r2.parametrize();
    let (i1, i2) = (Interval::of(&d1), Interval::of(&d2));
    match (e1.is_zero(), e2.is_zero()) {
        (true, true) => x1 == x2,
        (true, false) => line_param(&x2, &e2, &x1).map_or(false, |t| i2.contains(&t)),
        (false, true) => line_param(&x1, &e1, &x2).map_or(false, |s| i1.contains(&s)),
        (false, false) => {
            let r = &x2 - &x1;
            match e1.ratio_to(&e2) {
                // x1 + s e1 = x2 + t mu e1  <=>  s = k + mu t with x2 - x1 = k e1
                Some(mu) => match line_param(&ExactVector::zero(x1.dim()), &e1, &r) {
                    Some(k) => i1.meets(&i2.affine(&k, &mu)),
                    None => false,
                },
                None => match solve2(&e1, &-&e2, &r) {
                    Some((s, t)) => i1.contains(&s) && i2.contains(&t),
                    None => false,
                },
            }
        }
    }
}

pub fn strings_disjoint(s: &StringGeom, sp: &StringGeom) -> bool {
    !regions_intersect(&Region::string(s), &Region::string(sp))
}

/// First intersecting pair `(i, j)` with `i < j`, if any.
pub fn first_intersecting_pair(config: &[StringGeom]) -> Option<(usize, usize)> {
    (0..config.len())
        .flat_map(|i| (i + 1..config.len()).map(move |j| (i, j)))
        .find(|&(i, j)| !strings_disjoint(&config[i], &config[j]))
}

pub fn on_large_diagonal(config: &[StringGeom]) -> bool {
    first_intersecting_pair(config).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn ray(x: &[i64], e: &[i64]) -> StringGeom {
        StringGeom::new(ExactVector::from_ints(x), ExactVector::from_ints(e)).unwrap()
    }

    #[test]
    fn disjointness_examples() {
        assert!(!strings_disjoint(&ray(&[0, 0, 0, 0], &[0, 1, 0, 0]), &ray(&[0, 2, 0, 0], &[0, 0, 1, 0])));
        assert!(strings_disjoint(&ray(&[2, 0, 0, 1], &[-3, 0, 5, 0]), &ray(&[0, 0, 0, 0], &[0, 0, 1, 0])));
        let s = ray(&[1, 2, 3, 4], &[0, 1, 1, 0]);
        assert!(!strings_disjoint(&s, &s));
    }

    #[test]
    fn collinear_cases() {
        // same direction: always meet
        assert!(!strings_disjoint(&ray(&[0, 0, 0, 0], &[0, 1, 0, 0]), &ray(&[0, 5, 0, 0], &[0, 2, 0, 0])));
        // opposite directions, facing away
        assert!(strings_disjoint(&ray(&[0, 0, 0, 0], &[0, -1, 0, 0]), &ray(&[0, 5, 0, 0], &[0, 1, 0, 0])));
        // opposite directions, facing each other
        assert!(!strings_disjoint(&ray(&[0, 0, 0, 0], &[0, 1, 0, 0]), &ray(&[0, 5, 0, 0], &[0, -1, 0, 0])));
        // parallel but offset
        assert!(strings_disjoint(&ray(&[0, 0, 0, 0], &[0, 1, 0, 0]), &ray(&[0, 0, 1, 0], &[0, 1, 0, 0])));
    }

    #[test]
    fn pieces_and_points() {
        let s = ray(&[0, 0, 0, 0], &[0, 1, 0, 0]);
        let a = Region::piece(s.piece(int(0), Some(int(1))).unwrap());
        let b = Region::piece(s.piece(int(1), Some(int(2))).unwrap());
        let c = Region::piece(s.piece(int(2), None).unwrap());
        assert!(regions_intersect(&a, &b));
        assert!(!regions_intersect(&a, &c));
        let p = Region::point(ExactVector::new(vec![int(0), frac(1, 2), int(0), int(0)]).unwrap());
        assert!(regions_intersect(&a, &p));
        assert!(!regions_intersect(&c, &p));
    }

    #[test]
    fn diagonal_examples() {
        let s = ray(&[0, 0, 0, 0], &[0, 1, 0, 0]);
        assert!(on_large_diagonal(&[s.clone(), ray(&[0, 0, 1, 0], &[0, 1, 0, 0]), s.clone()]));
        let par: Vec<_> = (0..3).map(|k| ray(&[0, 0, k, 0], &[0, 1, 0, 0])).collect();
        assert!(!on_large_diagonal(&par));
        assert!(on_large_diagonal(&[s, ray(&[0, 1, -1, 0], &[0, 0, 1, 0])]));
    }
}
