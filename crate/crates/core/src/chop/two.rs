//! Cutting one string so that each piece is comparable with another string.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chop::diagonal::{solve2, strings_disjoint};
use crate::error::{Error, Result};
use crate::minkowski::{causal_class, project_orth, project_orth2, span_class, CausalClass, ExactVector, Hyperplane, SpanClass};
use crate::order::{compare_unchecked, later_region, region_side, separating_hyperplane, CompareResult, Region, Side, StringGeom};
use crate::rational::{self, Rational};

/// Case of the construction a pair fell into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProofBranch {
    /// `S` meets the line through `S'` and the two directions span a spacelike plane.
    SpacelikeMeeting,
    /// `S` meets the line through `S'`, timelike or lightlike span.
    CausalMeeting,
    /// Parallel directions, disjoint from the line.
    Parallel,
    /// Off the line and already comparable as whole strings.
    OffLineComparable,
    /// Incomparable: a single cut is made.
    Cut,
}

/// Which piece of the cut string lies above the other string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaterPiece {
    Finite,
    Tail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TwoChopResult {
    NoChopNeeded {
        relation: CompareResult,
        branch: ProofBranch,
        witness: Option<Hyperplane>,
    },
    Cut {
        #[serde(with = "rational::serde_str")]
        cut: Rational,
        /// `[0, cut]` against `S'`.
        finite: CompareResult,
        /// `[cut, inf)` against `S'`.
        tail: CompareResult,
        later: LaterPiece,
        /// Lies below the later piece and above `S'`.
        upper: Hyperplane,
        /// Lies below `S'` and above the earlier piece.
        lower: Hyperplane,
    },
}

impl TwoChopResult {
    pub fn branch(&self) -> ProofBranch {
        match self {
            TwoChopResult::NoChopNeeded { branch, .. } => *branch,
            TwoChopResult::Cut { .. } => ProofBranch::Cut,
        }
    }

    /// Re-checks every asserted relation with the decision procedure.
    pub fn verify(&self, s: &StringGeom, sp: &StringGeom) -> bool {
        let other = Region::string(sp);
        match self {
            TwoChopResult::NoChopNeeded { relation, witness, .. } => {
                let whole = Region::string(s);
                let rel_ok = compare_unchecked(&whole, &other) == *relation && relation.is_comparable();
                let wit_ok = witness.as_ref().map_or(true, |plane| {
                    let splits = |hi: &Region, lo: &Region| {
                        region_side(hi, plane) == Some(Side::Above) && region_side(lo, plane) == Some(Side::Below)
                    };
                    (relation.first_later() && splits(&whole, &other)) || (relation.second_later() && splits(&other, &whole))
                });
                rel_ok && wit_ok
            }
            TwoChopResult::Cut { cut, finite, tail, later, upper, lower } => {
                let Ok(fin) = s.piece(Rational::zero(), Some(cut.clone())) else { return false };
                let Ok(tl) = s.piece(cut.clone(), None) else { return false };
                let (fin, tl) = (Region::piece(fin), Region::piece(tl));
                let (hi, lo) = match later {
                    LaterPiece::Finite => (&fin, &tl),
                    LaterPiece::Tail => (&tl, &fin),
                };
                region_side(hi, upper) == Some(Side::Above)
                    && region_side(&other, upper) == Some(Side::Below)
                    && region_side(&other, lower) == Some(Side::Above)
                    && region_side(lo, lower) == Some(Side::Below)
                    && later_region(hi, &other)
                    && later_region(&other, lo)
                    && compare_unchecked(&fin, &other) == *finite
                    && compare_unchecked(&tl, &other) == *tail
            }
        }
    }
}

fn verify_failure(what: &str) -> Error {
    Error::InternalVerificationFailure(what.to_string())
}

/// Parameter `t >= 0` at which `S` meets the line through `S'` behind its base.
fn meets_line(s: &StringGeom, sp: &StringGeom) -> Option<Rational> {
    if s.dir.is_parallel(&sp.dir) {
        return None;
    }
    // x + t e = x' - t' e'
    let (t, tp) = solve2(&s.dir, &sp.dir, &(&sp.base - &s.base))?;
    (!t.is_negative() && tp.is_positive()).then_some(t)
}

pub fn chop_two(s: &StringGeom, sp: &StringGeom) -> Result<TwoChopResult> {
    if !strings_disjoint(s, sp) {
        return Err(Error::NotDisjoint);
    }
    let whole = Region::string(s);
    let other = Region::string(sp);
    let relation = compare_unchecked(&whole, &other);

    if let Some(t) = meets_line(s, sp) {
        return match span_class(&s.dir, &sp.dir)? {
            SpanClass::SpacelikeSpan | SpanClass::DegenerateParallel => {
                if relation != CompareResult::SpacelikeSeparated {
                    return Err(verify_failure("strings in a spacelike plane are not spacelike separated"));
                }
                Ok(TwoChopResult::NoChopNeeded {
                    relation,
                    branch: ProofBranch::SpacelikeMeeting,
                    witness: None,
                })
            }
            SpanClass::TimelikeSpan | SpanClass::LightlikeSpan => {
                let result = meeting_hyperplane(s, sp, &t, relation)?;
                if !result.verify(s, sp) {
                    return Err(verify_failure("meeting-point hyperplane"));
                }
                Ok(result)
            }
        };
    }

    if relation.is_comparable() {
        let branch = if s.dir.is_parallel(&sp.dir) {
            ProofBranch::Parallel
        } else {
            ProofBranch::OffLineComparable
        };
        let witness = if relation.first_later() {
            separating_hyperplane(&whole, &other)?
        } else {
            separating_hyperplane(&other, &whole)?
        };
        let result = TwoChopResult::NoChopNeeded { relation, branch, witness };
        if !result.verify(s, sp) {
            return Err(verify_failure("comparable pair witness"));
        }
        return Ok(result);
    }

    if s.dir.is_parallel(&sp.dir) {
        return Err(verify_failure("parallel strings off the line are incomparable"));
    }
    let result = cut(s, sp)?;
    if !result.verify(s, sp) {
        return Err(verify_failure("cut certificate"));
    }
    Ok(result)
}

/// Hyperplane through the midpoint between the meeting point and the base of
/// `S'`, orthogonal to `P⊥_e(w)`.
fn meeting_hyperplane(s: &StringGeom, sp: &StringGeom, t: &Rational, relation: CompareResult) -> Result<TwoChopResult> {
    let w = ExactVector::time_unit(s.dim());
    let u = project_orth(&s.dir, &w)?;
    let meet = s.point_at(t);
    let tp = sp
        .dir
        .ratio_to(&(&sp.base - &meet))
        .ok_or_else(|| verify_failure("meeting point off the line"))?;
    let base = meet.add_scaled(&(tp / rational::int(2)), &sp.dir);
    let plane = Hyperplane::new(base, u.clone())?;
    let k = sp.dir.dot(&u);
    let expected = if k.is_negative() {
        CompareResult::FirstLater
    } else if k.is_positive() {
        CompareResult::SecondLater
    } else {
        return Err(verify_failure("causal span orthogonal to a timelike vector"));
    };
    // spacelike separation would need both orders; the hyperplane shows one
    let agrees = match expected {
        CompareResult::FirstLater => relation.first_later(),
        _ => relation.second_later(),
    };
    if !agrees {
        return Err(verify_failure("meeting-point orientation disagrees with the decision procedure"));
    }
    Ok(TwoChopResult::NoChopNeeded {
        relation,
        branch: ProofBranch::CausalMeeting,
        witness: Some(plane),
    })
}

/// `phi(s) = (P⊥_{e'} xi(s))^2` as `[c0, c1, c2]`.
fn phi_coeffs(s: &StringGeom, sp: &StringGeom) -> Result<[Rational; 3]> {
    let p0 = project_orth(&sp.dir, &(&s.base - &sp.base))?;
    let p1 = project_orth(&sp.dir, &s.dir)?;
    Ok([p0.norm_sq(), rational::int(2) * p0.dot(&p1), p1.norm_sq()])
}

fn eval(c: &[Rational; 3], s: &Rational) -> Rational {
    &c[0] + s * (&c[1] + s * &c[2])
}

/// A positive parameter with `phi < 0`: least-denominator dyadic near the
/// vertex for a bounded feasible set, least positive integer otherwise.
fn cut_parameter(c: &[Rational; 3]) -> Option<Rational> {
    let inside = |s: &Rational| s.is_positive() && eval(c, s).is_negative();
    let two = rational::int(2);
    let unbounded = c[2].is_negative() || (c[2].is_zero() && c[1].is_negative()) || (c[2].is_zero() && c[1].is_zero());
    if unbounded {
        let mut hi = Rational::one();
        let mut steps = 0;
        while !inside(&hi) {
            hi = hi * &two;
            steps += 1;
            if steps > 256 {
                return None;
            }
        }
        if hi == Rational::one() {
            return Some(hi);
        }
        // one sign change in (hi/2, hi]; binary search the least integer
        let mut lo = (&hi / &two).to_integer();
        let mut top = hi.to_integer();
        while &top - &lo > num_bigint::BigInt::one() {
            let mid: num_bigint::BigInt = (&lo + &top) / 2;
            if inside(&Rational::from_integer(mid.clone())) {
                top = mid;
            } else {
                lo = mid;
            }
        }
        return Some(Rational::from_integer(top));
    }
    let anchor = if c[2].is_positive() {
        let v = -&c[1] / (&two * &c[2]);
        if inside(&v) {
            Some(v)
        } else {
            (0..=256u32).map(rational::inv_pow2).find(|s| inside(s))
        }
    } else {
        // linear with positive slope: (0, -c0/c1)
        let v = -&c[0] / (&two * &c[1]);
        inside(&v).then_some(v)
    }?;
    Some(rational::least_dyadic_near(&anchor, inside))
}

fn cut(s: &StringGeom, sp: &StringGeom) -> Result<TwoChopResult> {
    let coeffs = phi_coeffs(s, sp)?;
    let cut = cut_parameter(&coeffs)
        .ok_or_else(|| verify_failure("incomparable pair without a point in the causal complement of the line"))?;
    let xi = &s.point_at(&cut) - &sp.base;
    let pxi = project_orth(&sp.dir, &xi)?;
    let w = ExactVector::time_unit(s.dim());
    let mut u = project_orth2(&sp.dir, &pxi, &w);
    if u.dot(&s.dir).is_zero() {
        u = perturb_in_complement(&u, &sp.dir, &pxi, &s.dir)
            .ok_or_else(|| verify_failure("direction lies in the plane of the cut point and the line"))?;
    }
    let sigma = rational::sign(&u.dot(&s.dir));
    let keeps = |v: &ExactVector| {
        causal_class(v) == CausalClass::TimelikeFuture && rational::sign(&v.dot(&s.dir)) == sigma
    };
    let mut found = None;
    for k in 0..=256u32 {
        let eps = rational::inv_pow2(k);
        let up = u.add_scaled(&eps, &pxi);
        let um = u.add_scaled(&-&eps, &pxi);
        if keeps(&up) && keeps(&um) {
            found = Some((eps, up, um));
            break;
        }
    }
    let (eps, up, um) = found.ok_or_else(|| verify_failure("no admissible epsilon"))?;
    let delta = -(&eps * xi.dot(&pxi));
    let two = rational::int(2);
    let upper = Hyperplane::new(
        sp.base.add_scaled(&(&delta / (&two * um.norm_sq())), &um),
        um.clone(),
    )?;
    let lower = Hyperplane::new(
        sp.base.add_scaled(&-(&delta / (&two * up.norm_sq())), &up),
        up.clone(),
    )?;
    let later = if sigma > 0 { LaterPiece::Tail } else { LaterPiece::Finite };
    let other = Region::string(sp);
    let fin = Region::piece(s.piece(Rational::zero(), Some(cut.clone()))?);
    let tl = Region::piece(s.piece(cut.clone(), None)?);
    Ok(TwoChopResult::Cut {
        finite: compare_unchecked(&fin, &other),
        tail: compare_unchecked(&tl, &other),
        cut,
        later,
        upper,
        lower,
    })
}

/// Future timelike vector orthogonal to `a` and `b` with nonzero product
/// against `e`, found by tilting `u` along projected coordinate axes.
fn perturb_in_complement(u: &ExactVector, a: &ExactVector, b: &ExactVector, e: &ExactVector) -> Option<ExactVector> {
    let dim = u.dim();
    for axis in 1..dim {
        let mut coords = vec![Rational::zero(); dim];
        coords[axis] = Rational::one();
        let dir = project_orth2(a, b, &ExactVector::new(coords).ok()?);
        if dir.dot(e).is_zero() {
            continue;
        }
        for k in 0..=64u32 {
            let cand = u.add_scaled(&rational::inv_pow2(k), &dir);
            if causal_class(&cand) == CausalClass::TimelikeFuture {
                return Some(cand);
            }
        }
    }
    None
}
