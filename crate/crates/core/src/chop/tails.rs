//! Direction separators, spacelike direction cones and tail cuts.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::{
    causal_class, check_dims, is_spacelike, later_direction, project_orth, project_orth2,
    span_class, unit_combination_time_sign, CausalClass, ExactVector, SpanClass,
};
use crate::order::StringGeom;
use crate::rational::{self, Rational};

/// Which construction produced a separator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeparatorCase {
    SpacelikeSpan,
    TimelikeOpposed,
    TimelikeAligned,
    LightlikeSpan,
    Antiparallel,
}

fn timelike_future(u: &ExactVector) -> bool {
    causal_class(u) == CausalClass::TimelikeFuture
}

/// Ratio `r` for combinations `e - r e'`: `sqrt(A/B)` when rational (this is
/// the unit-vector choice), otherwise the midpoint of `(lo, hi)`.
fn pick_ratio(a: &Rational, b: &Rational, lo: &Rational, hi: &Rational) -> Rational {
    if let Some(r) = rational::exact_sqrt(&(a / b)) {
        if &r > lo && &r < hi {
            return r;
        }
    }
    (lo + hi) / rational::int(2)
}

/// Largest `eps = 2^-k` with `ok(eps)` and `base + 2 eps dir` still future
/// timelike.
fn pick_eps(base: &ExactVector, dir: &ExactVector, ok: impl Fn(&ExactVector) -> bool) -> Option<(Rational, ExactVector)> {
    for k in 0..=64u32 {
        let eps = rational::inv_pow2(k);
        let u = base.add_scaled(&eps, dir);
        let doubled = base.add_scaled(&(&eps * rational::int(2)), dir);
        if timelike_future(&u) && timelike_future(&doubled) && ok(&u) {
            return Some((eps, u));
        }
    }
    None
}

/// Future timelike `u` with `u . e > 0 > u . e'`, for spacelike `e`, `e'` whose
/// unit directions satisfy `e^ ⪰ e'^`.
pub fn direction_separator(e: &ExactVector, ep: &ExactVector) -> Result<ExactVector> {
    direction_separator_case(e, ep).map(|(u, _)| u)
}

pub fn direction_separator_case(e: &ExactVector, ep: &ExactVector) -> Result<(ExactVector, SeparatorCase)> {
    check_dims(e, ep)?;
    for v in [e, ep] {
        if !is_spacelike(v) {
            return Err(Error::NotSpacelike(v.to_string()));
        }
    }
    if !later_direction(e, ep) {
        return Err(Error::PreconditionViolated(format!(
            "unit direction of {e} is not later than that of {ep}"
        )));
    }
    let dim = e.dim();
    let w = ExactVector::time_unit(dim);
    let a = -e.norm_sq();
    let b = -ep.norm_sq();
    let c = e.dot(ep);
    let separates = |u: &ExactVector| u.dot(e).is_positive() && u.dot(ep).is_negative();
    let fail = || Error::InternalVerificationFailure(format!("no separator for {e}, {ep}"));

    let (u, case) = match span_class(e, ep)? {
        SpanClass::DegenerateParallel => {
            let base = project_orth(e, &w)?;
            let (_, u) = pick_eps(&base, &-e, separates).ok_or_else(fail)?;
            (u, SeparatorCase::Antiparallel)
        }
        SpanClass::SpacelikeSpan => {
            let f = project_orth(e, ep)?;
            let base = project_orth2(e, &f, &w);
            let r = if c.is_negative() {
                let abs = -&c;
                pick_ratio(&a, &b, &(&abs / &b), &(&a / &abs))
            } else {
                rational::exact_sqrt(&(&a / &b)).unwrap_or_else(Rational::one)
            };
            let dir = -(e.add_scaled(&-r, ep));
            let (_, u) = pick_eps(&base, &dir, separates).ok_or_else(fail)?;
            (u, SeparatorCase::SpacelikeSpan)
        }
        SpanClass::TimelikeSpan if c.is_negative() => {
            let abs = -&c;
            let r = pick_ratio(&a, &b, &(&a / &abs), &(&abs / &b));
            (e.add_scaled(&-r, ep), SeparatorCase::TimelikeOpposed)
        }
        SpanClass::TimelikeSpan => {
            if unit_combination_time_sign(e, ep, 1) > 0 {
                let base = e.add_scaled(&(&c / &b), ep);
                let (_, u) = pick_eps(&base, ep, separates).ok_or_else(fail)?;
                (u, SeparatorCase::TimelikeAligned)
            } else {
                let base = -(ep.add_scaled(&(&c / &a), e));
                let (_, u) = pick_eps(&base, &-e, separates).ok_or_else(fail)?;
                (u, SeparatorCase::TimelikeAligned)
            }
        }
        SpanClass::LightlikeSpan => {
            let u = if c.is_negative() {
                let base = project_orth(ep, &w)?;
                pick_eps(&base, e, separates)
            } else if unit_combination_time_sign(e, ep, 1) > 0 {
                let base = project_orth(ep, &w)?;
                pick_eps(&base, ep, separates)
            } else {
                let base = project_orth(e, &w)?;
                pick_eps(&base, &-e, separates)
            };
            (u.ok_or_else(fail)?.1, SeparatorCase::LightlikeSpan)
        }
    };
    if !(timelike_future(&u) && separates(&u)) {
        return Err(Error::InternalVerificationFailure(format!(
            "separator {u} for {e}, {ep} failed re-verification"
        )));
    }
    Ok((u, case))
}

/// The double cone `(e⁻ + V₊) ∩ (e⁺ - V₊)` around a spacelike center, with
/// tips `e∓ = e ∓ h q` where `q` is the part of the time axis orthogonal to `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionCone {
    pub center: ExactVector,
    pub lower: ExactVector,
    pub upper: ExactVector,
    #[serde(with = "rational::serde_str")]
    pub half_width: Rational,
}

impl DirectionCone {
    pub fn around(center: &ExactVector, half_width: Rational) -> Result<Self> {
        if !is_spacelike(center) {
            return Err(Error::NotSpacelike(center.to_string()));
        }
        if !half_width.is_positive() {
            return Err(Error::PreconditionViolated("cone half width must be positive".into()));
        }
        let q = project_orth(center, &ExactVector::time_unit(center.dim()))?;
        Ok(Self {
            center: center.clone(),
            lower: center.add_scaled(&-&half_width, &q),
            upper: center.add_scaled(&half_width, &q),
            half_width,
        })
    }

    pub fn shrunk(&self) -> Self {
        Self::around(&self.center, &self.half_width / rational::int(2)).expect("center stays spacelike")
    }

    /// Strict interior membership of a point.
    pub fn contains(&self, y: &ExactVector) -> bool {
        timelike_future(&(y - &self.lower)) && timelike_future(&(&self.upper - y))
    }

    /// Every point of the cone is spacelike. In the rest frame of `q` a point
    /// `e + v` has `|v^0| + |v_s| < h|q|`, so `h^2 q.q < -e.e` suffices.
    pub fn is_spacelike_cone(&self) -> bool {
        let hq = &self.upper - &self.center;
        (self.center.norm_sq() + hq.norm_sq()).is_negative()
    }

    /// Certifies `C_self ⪰ C_other` by a separator between the facing tips.
    pub fn later_than(&self, other: &Self) -> Option<ExactVector> {
        if !later_direction(&self.lower, &other.upper) {
            return None;
        }
        direction_separator(&self.lower, &other.upper).ok()
    }
}

/// Scale `lam > 0` with `lam * dir` inside the cone, if one is found.
fn radial_scale(dir: &ExactVector, cone: &DirectionCone) -> Option<Rational> {
    if let Some(mu) = dir.ratio_to(&cone.center) {
        return mu.is_positive().then_some(mu);
    }
    if !is_spacelike(dir) {
        return None;
    }
    // approach the unit-norm scale sqrt(A_center / A_dir) from both sides
    let target = cone.center.norm_sq() / dir.norm_sq();
    let (mut lo, mut hi) = (Rational::zero(), Rational::one());
    while &hi * &hi < target {
        hi = hi * rational::int(2);
    }
    for _ in 0..128 {
        if let Some(r) = rational::exact_sqrt(&target) {
            if cone.contains(&dir.scale(&r)) {
                return Some(r);
            }
        }
        let mid = (&lo + &hi) / rational::int(2);
        if cone.contains(&dir.scale(&mid)) {
            return Some(mid);
        }
        if &mid * &mid < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    None
}

/// Parameter `s` with `x + [s, inf) e` inside the cone `R⁺ D` over the cone.
pub fn tail_cut(s: &StringGeom, cone: &DirectionCone) -> Result<Rational> {
    check_dims(&s.dir, &cone.center)?;
    let lam = radial_scale(&s.dir, cone).ok_or(Error::DirectionNotInCone)?;
    let y = s.dir.scale(&lam);
    // x + t e = (t / lam) (y + (lam / t) x); the tail from t is inside once
    // y + (lam / t) x is, and the condition only improves as t grows
    let lo = &y - &cone.lower;
    let hi = &cone.upper - &y;
    let inside = |t: &Rational| {
        let k = &lam / t;
        timelike_future(&lo.add_scaled(&k, &s.base)) && timelike_future(&hi.add_scaled(&-&k, &s.base))
    };
    let mut t = Rational::one();
    for _ in 0..512 {
        if inside(&t) {
            return Ok(t);
        }
        t = t * rational::int(2);
    }
    Err(Error::InternalVerificationFailure("tail cut did not converge".into()))
}

/// Orders the unit directions by their time component, latest first, ties
/// broken by index.
pub fn direction_order(dirs: &[ExactVector]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..dirs.len()).collect();
    idx.sort_by(|&i, &j| crate::minkowski::cmp_unit_time(&dirs[j], &dirs[i]).then(i.cmp(&j)));
    idx
}

/// Shrinks one cone per direction (halving the common width) until every pair
/// `(a, b)` with `e_a^0 >= e_b^0` is certified `C_a ⪰ C_b`.
pub fn ordered_cones(dirs: &[ExactVector], max_rounds: u32) -> Result<Vec<DirectionCone>> {
    let mut width = Rational::one();
    for _ in 0..max_rounds {
        let cones: Vec<DirectionCone> = dirs
            .iter()
            .map(|d| DirectionCone::around(d, width.clone()))
            .collect::<Result<_>>()?;
        let ok = cones.iter().all(DirectionCone::is_spacelike_cone)
            && (0..dirs.len()).all(|a| {
                (0..dirs.len()).all(|b| {
                    a == b
                        || crate::minkowski::cmp_unit_time(&dirs[a], &dirs[b]) == Ordering::Less
                        || cones[a].later_than(&cones[b]).is_some()
                })
            });
        if ok {
            return Ok(cones);
        }
        width = width / rational::int(2);
    }
    Err(Error::InternalVerificationFailure("direction cones could not be separated".into()))
}
