//! Exact linear algebra and causal classification in `d`-dimensional
//! Minkowski space with signature `(+,-,...,-)`.
//!
//! Directions are never normalized. Every predicate that would naturally be
//! phrased for unit vectors is stated in a scale-invariant form so only
//! rational data is manipulated.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub const DEFAULT_DIMENSION: usize = 4;

/// A point or vector with exact rational coordinates; index 0 is time.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactVector {
    coords: Vec<Rational>,
}

impl ExactVector {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DimensionTooSmall(coords.len()));
        }
        Ok(Self { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| rational::int(c)).collect())
            .expect("at least two coordinates")
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            coords: vec![Rational::zero(); dim],
        }
    }

    /// The unit time vector `(1, 0, ..., 0)`.
    pub fn time_unit(dim: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coords[0] = rational::int(1);
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn time(&self) -> &Rational {
        &self.coords[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Minkowski product. Panics on dimension mismatch; use [`mdot`] at
    /// untrusted boundaries.
    pub fn dot(&self, other: &Self) -> Rational {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let mut acc = &self.coords[0] * &other.coords[0];
        for (a, b) in self.coords[1..].iter().zip(&other.coords[1..]) {
            acc -= a * b;
        }
        acc
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    /// `self + k * other`
    pub fn add_scaled(&self, k: &Rational, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + k * b)
                .collect(),
        }
    }

    /// Returns `mu` with `other = mu * self`, if the two are parallel and `self` is nonzero.
    pub fn ratio_to(&self, other: &Self) -> Option<Rational> {
        let pivot = self.coords.iter().position(|c| !c.is_zero())?;
        let mu = &other.coords[pivot] / &self.coords[pivot];
        if self.scale(&mu) == *other {
            Some(mu)
        } else {
            None
        }
    }

    pub fn is_parallel(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return true;
        }
        self.ratio_to(other).is_some()
    }
}

impl Index<usize> for ExactVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.coords[i]
    }
}

impl<'a> Add<&'a ExactVector> for &'a ExactVector {
    type Output = ExactVector;

    fn add(self, rhs: &'a ExactVector) -> ExactVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        ExactVector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ExactVector> for &'a ExactVector {
    type Output = ExactVector;

    fn sub(self, rhs: &'a ExactVector) -> ExactVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        ExactVector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for ExactVector {
    type Output = ExactVector;

    fn neg(self) -> ExactVector {
        -&self
    }
}

impl Neg for &ExactVector {
    type Output = ExactVector;

    fn neg(self) -> ExactVector {
        ExactVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&ExactVector> for &Rational {
    type Output = ExactVector;

    fn mul(self, rhs: &ExactVector) -> ExactVector {
        rhs.scale(self)
    }
}

impl fmt::Debug for ExactVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for ExactVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for ExactVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational::serde_str_vec::serialize(&self.coords, s)
    }
}

impl<'de> Deserialize<'de> for ExactVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords = rational::serde_str_vec::deserialize(d)?;
        ExactVector::new(coords).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalClass {
    Zero,
    TimelikeFuture,
    TimelikePast,
    LightlikeFuture,
    LightlikePast,
    Spacelike,
}

impl CausalClass {
    /// Class of the negated vector.
    pub fn mirror(self) -> Self {
        use CausalClass::*;
        match self {
            TimelikeFuture => TimelikePast,
            TimelikePast => TimelikeFuture,
            LightlikeFuture => LightlikePast,
            LightlikePast => LightlikeFuture,
            other => other,
        }
    }

    /// Member of the closed past cone (including the origin).
    pub fn in_closed_past(self) -> bool {
        matches!(self, Self::Zero | Self::TimelikePast | Self::LightlikePast)
    }

    pub fn in_closed_future(self) -> bool {
        matches!(self, Self::Zero | Self::TimelikeFuture | Self::LightlikeFuture)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpanClass {
    SpacelikeSpan,
    TimelikeSpan,
    LightlikeSpan,
    DegenerateParallel,
}

/// A spacelike hyperplane `base + normal^perp` with future timelike normal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub base: ExactVector,
    pub normal: ExactVector,
}

impl Hyperplane {
    pub fn new(base: ExactVector, normal: ExactVector) -> Result<Self> {
        if base.dim() != normal.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                found: normal.dim(),
            });
        }
        if causal_class(&normal) != CausalClass::TimelikeFuture {
            return Err(Error::InvalidHyperplane);
        }
        Ok(Self { base, normal })
    }

    /// Signed height `(z - base) . normal`.
    pub fn height(&self, z: &ExactVector) -> Rational {
        (z - &self.base).dot(&self.normal)
    }
}

pub fn check_dims(x: &ExactVector, y: &ExactVector) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(())
}

pub fn mdot(x: &ExactVector, y: &ExactVector) -> Result<Rational> {
    check_dims(x, y)?;
    Ok(x.dot(y))
}

pub fn causal_class(xi: &ExactVector) -> CausalClass {
    if xi.is_zero() {
        return CausalClass::Zero;
    }
    let sq = xi.norm_sq();
    let future = xi.time().is_positive();
    if sq.is_positive() {
        if future {
            CausalClass::TimelikeFuture
        } else {
            CausalClass::TimelikePast
        }
    } else if sq.is_zero() {
        if future {
            CausalClass::LightlikeFuture
        } else {
            CausalClass::LightlikePast
        }
    } else {
        CausalClass::Spacelike
    }
}

pub fn is_spacelike(xi: &ExactVector) -> bool {
    causal_class(xi) == CausalClass::Spacelike
}

/// Gram determinant `(e.e)(f.f) - (e.f)^2` of the pair.
pub fn gram(e: &ExactVector, f: &ExactVector) -> Rational {
    let ef = e.dot(f);
    e.norm_sq() * f.norm_sq() - &ef * &ef
}

pub fn span_class(e: &ExactVector, f: &ExactVector) -> Result<SpanClass> {
    check_dims(e, f)?;
    for v in [e, f] {
        if !is_spacelike(v) {
            return Err(Error::NotSpacelike(v.to_string()));
        }
    }
    if e.is_parallel(f) {
        return Ok(SpanClass::DegenerateParallel);
    }
    let g = gram(e, f);
    Ok(if g.is_negative() {
        SpanClass::TimelikeSpan
    } else if g.is_zero() {
        SpanClass::LightlikeSpan
    } else {
        SpanClass::SpacelikeSpan
    })
}

/// Projection of `xi` onto the Minkowski orthogonal complement of `axis`.
pub fn project_orth(axis: &ExactVector, xi: &ExactVector) -> Result<ExactVector> {
    check_dims(axis, xi)?;
    let nn = axis.norm_sq();
    if nn.is_zero() {
        return Err(Error::DegenerateProjector);
    }
    let k = -(axis.dot(xi) / nn);
    Ok(xi.add_scaled(&k, axis))
}

/// Projection onto the orthogonal complement of the span of two mutually
/// orthogonal non-null vectors.
pub(crate) fn project_orth2(a: &ExactVector, b: &ExactVector, xi: &ExactVector) -> ExactVector {
    let ka = -(a.dot(xi) / a.norm_sq());
    let kb = -(b.dot(xi) / b.norm_sq());
    xi.add_scaled(&ka, a).add_scaled(&kb, b)
}

/// Compares the time components of the unit-normalized spacelike directions
/// `e / sqrt(-e.e)` and `f / sqrt(-f.f)` without leaving the rationals.
pub fn cmp_unit_time(e: &ExactVector, f: &ExactVector) -> Ordering {
    let a = -e.norm_sq();
    let b = -f.norm_sq();
    // e0/sqrt(a) vs f0/sqrt(b)  <=>  e0*sqrt(b) vs f0*sqrt(a)
    rational::cmp_scaled_roots(e.time(), &b, f.time(), &a)
}

/// Whether `e` and `f` name the same point of the hyperboloid of spacelike
/// directions, i.e. `f` is a positive multiple of `e`.
pub fn same_direction(e: &ExactVector, f: &ExactVector) -> bool {
    matches!(e.ratio_to(f), Some(mu) if mu.is_positive())
}

/// Posteriority between the unit-normalized directions `e` and `f`, treated as
/// events: `e/|e| - f/|f|` is outside the closed past cone.
pub fn later_direction(e: &ExactVector, f: &ExactVector) -> bool {
    if same_direction(e, f) {
        return false;
    }
    let a = -e.norm_sq();
    let b = -f.norm_sq();
    let c = e.dot(f);
    // (e^ - f^)^2 = -2 - 2c/sqrt(ab) >= 0  <=>  c < 0 and c^2 >= ab
    let causal = c.is_negative() && &c * &c >= &a * &b;
    if !causal {
        return true;
    }
    cmp_unit_time(e, f) != Ordering::Less
}

/// Time orientation of the unit-normalized combination `e/|e| + sign * f/|f|`.
pub(crate) fn unit_combination_time_sign(e: &ExactVector, f: &ExactVector, sign: i8) -> i8 {
    let a = -e.norm_sq();
    let b = -f.norm_sq();
    // e0*sqrt(b) + sign*f0*sqrt(a) compared with 0
    let neg_f0 = if sign > 0 { -f.time().clone() } else { f.time().clone() };
    match rational::cmp_scaled_roots(e.time(), &b, &neg_f0, &a) {
        Ordering::Greater => 1,
        Ordering::Equal => 0,
        Ordering::Less => -1,
    }
}

/// Fixed probes in the forward cone: the time axis and `(1, ±1/2, ..., ±1/2)/...`
/// tilted along every spatial sign pattern, scaled to stay timelike.
pub fn probe_set(dim: usize) -> Vec<ExactVector> {
    let spatial = dim - 1;
    // |v|^2 = spatial * k^2 < 1 with k = 1/(spatial + 1)
    let k = rational::frac(1, spatial as i64 + 1);
    let mut out = vec![ExactVector::time_unit(dim)];
    for mask in 0..(1u64 << spatial.min(16)) {
        let mut coords = vec![rational::int(1)];
        for i in 0..spatial {
            let bit = i < 16 && mask & (1 << i) != 0;
            coords.push(if bit { -k.clone() } else { k.clone() });
        }
        out.push(ExactVector { coords });
    }
    out
}

/// A future timelike `u` with `u . xi < 0`, or `None` when `xi` lies in the
/// closed forward cone (where `u . xi >= 0` for every such `u`).
pub fn dual_witness(xi: &ExactVector) -> Option<ExactVector> {
    if causal_class(xi).in_closed_future() {
        return None;
    }
    let dim = xi.dim();
    let t = xi.time();
    if t.is_negative() {
        return Some(ExactVector::time_unit(dim));
    }
    // tilt the time axis towards the spatial part: u = (1, lam * xs)
    let xs2: Rational = xi.coords[1..].iter().map(|c| c * c).sum();
    let one = rational::int(1);
    let base = t / &xs2;
    let mut k = 0;
    loop {
        let lam = &base + rational::inv_pow2(k);
        if &lam * &lam * &xs2 < one {
            let mut coords = vec![one.clone()];
            coords.extend(xi.coords[1..].iter().map(|c| c * &lam));
            let u = ExactVector { coords };
            debug_assert!(causal_class(&u) == CausalClass::TimelikeFuture && u.dot(xi).is_negative());
            return Some(u);
        }
        k += 1;
    }
}
