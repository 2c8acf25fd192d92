//! Posteriority between points, string segments and rays.
//!
//! `R ⪰ S` holds when no point of `R` lies in the closed past cone of a
//! point of `S`. For the regions handled here this is the emptiness of a
//! quadratic/affine semi-algebraic set over a parameter box, decided exactly
//! by [`crate::feasibility`]. A negative answer always carries a witness.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chop::diagonal::regions_intersect;
use crate::chop::tails::direction_separator;
use crate::error::{Error, Result};
use crate::feasibility::{self, Affine, Domain, Quadratic};
use crate::minkowski::{
    causal_class, check_dims, gram, is_spacelike, project_orth, project_orth2, ExactVector,
    Hyperplane,
};
use crate::rational::{self, Rational};

/// The ray `base + R≥0 dir` with spacelike `dir`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StringGeom {
    #[serde(rename = "x")]
    pub base: ExactVector,
    #[serde(rename = "e")]
    pub dir: ExactVector,
}

impl StringGeom {
    pub fn new(base: ExactVector, dir: ExactVector) -> Result<Self> {
        check_dims(&base, &dir)?;
        if !is_spacelike(&dir) {
            return Err(Error::NotSpacelike(dir.to_string()));
        }
        Ok(Self { base, dir })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn point_at(&self, s: &Rational) -> ExactVector {
        self.base.add_scaled(s, &self.dir)
    }

    pub fn whole(&self) -> Piece {
        Piece {
            parent: self.clone(),
            lo: Rational::zero(),
            hi: None,
        }
    }

    pub fn piece(&self, lo: Rational, hi: Option<Rational>) -> Result<Piece> {
        Piece::new(self.clone(), lo, hi)
    }
}

/// The parameter interval `[lo, hi]` (or `[lo, inf)`) of a string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Piece {
    pub parent: StringGeom,
    #[serde(with = "rational::serde_str")]
    pub lo: Rational,
    #[serde(with = "rational::serde_str_opt")]
    pub hi: Option<Rational>,
}

impl Piece {
    pub fn new(parent: StringGeom, lo: Rational, hi: Option<Rational>) -> Result<Self> {
        if lo.is_negative() {
            return Err(Error::InvalidPiece(format!("lower end {lo} is negative")));
        }
        if let Some(h) = &hi {
            if h <= &lo {
                return Err(Error::InvalidPiece(format!("empty interval [{lo}, {h}]")));
            }
        }
        Ok(Self { parent, lo, hi })
    }

    pub fn is_tail(&self) -> bool {
        self.hi.is_none()
    }

    fn domain(&self) -> Domain {
        match &self.hi {
            Some(h) => Domain::Closed(self.lo.clone(), h.clone()),
            None => Domain::From(self.lo.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Point { at: ExactVector },
    Piece { piece: Piece },
}

impl Region {
    pub fn point(at: ExactVector) -> Self {
        Region::Point { at }
    }

    pub fn string(s: &StringGeom) -> Self {
        Region::Piece { piece: s.whole() }
    }

    pub fn piece(p: Piece) -> Self {
        Region::Piece { piece: p }
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::Point { at } => at.dim(),
            Region::Piece { piece } => piece.parent.dim(),
        }
    }

    /// `(origin, direction, parameter domain)`; a point has a zero direction.
    pub(crate) fn parametrize(&self) -> (ExactVector, ExactVector, Domain) {
        match self {
            Region::Point { at } => (at.clone(), ExactVector::zero(at.dim()), Domain::Point(Rational::zero())),
            Region::Piece { piece } => (
                piece.parent.base.clone(),
                piece.parent.dir.clone(),
                piece.domain(),
            ),
        }
    }

    pub fn point_at(&self, param: &Rational) -> ExactVector {
        match self {
            Region::Point { at } => at.clone(),
            Region::Piece { piece } => piece.parent.point_at(param),
        }
    }

    /// Finite endpoints and, for an unbounded piece, its recession direction.
    fn endpoints(&self) -> (Vec<ExactVector>, Option<ExactVector>) {
        match self {
            Region::Point { at } => (vec![at.clone()], None),
            Region::Piece { piece } => {
                let s = &piece.parent;
                let mut ends = vec![s.point_at(&piece.lo)];
                match &piece.hi {
                    Some(h) => {
                        ends.push(s.point_at(h));
                        (ends, None)
                    }
                    None => (ends, Some(s.dir.clone())),
                }
            }
        }
    }
}

/// A point pair `(z1(s), z2(t))` whose difference lies in the closed past cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "rational::serde_str")]
    pub s: Rational,
    #[serde(with = "rational::serde_str")]
    pub t: Rational,
    pub xi: ExactVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CompareResult {
    SpacelikeSeparated,
    FirstLater,
    SecondLater,
    Incomparable,
}

impl CompareResult {
    pub fn from_relations(first_later: bool, second_later: bool) -> Self {
        match (first_later, second_later) {
            (true, true) => CompareResult::SpacelikeSeparated,
            (true, false) => CompareResult::FirstLater,
            (false, true) => CompareResult::SecondLater,
            (false, false) => CompareResult::Incomparable,
        }
    }

    pub fn first_later(self) -> bool {
        matches!(self, CompareResult::SpacelikeSeparated | CompareResult::FirstLater)
    }

    pub fn second_later(self) -> bool {
        matches!(self, CompareResult::SpacelikeSeparated | CompareResult::SecondLater)
    }

    pub fn is_comparable(self) -> bool {
        self != CompareResult::Incomparable
    }

    pub fn swapped(self) -> Self {
        CompareResult::from_relations(self.second_later(), self.first_later())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Above,
    On,
    Below,
}

pub fn later_point_point(x: &ExactVector, y: &ExactVector) -> bool {
    !causal_class(&(x - y)).in_closed_past()
}

pub fn later_vs_hyperplane(z: &ExactVector, plane: &Hyperplane) -> Side {
    let h = plane.height(z);
    if h.is_positive() {
        Side::Above
    } else if h.is_zero() {
        Side::On
    } else {
        Side::Below
    }
}

/// Exact search for a pair of points `z1 ∈ r1`, `z2 ∈ r2` with
/// `z1 - z2` in the closed past cone. `None` means `r1 ⪰ r2`.
pub fn past_witness(r1: &Region, r2: &Region) -> Option<Witness> {
    let (x1, e1, d1) = r1.parametrize();
    let (x2, e2, d2) = r2.parametrize();
    let c = &x1 - &x2;
    let two = rational::int(2);
    // xi(s, t) = c + s e1 - t e2
    let f = Quadratic {
        c: c.norm_sq(),
        s: &two * c.dot(&e1),
        t: -(&two * c.dot(&e2)),
        ss: e1.norm_sq(),
        st: -(&two * e1.dot(&e2)),
        tt: e2.norm_sq(),
    };
    // probe w = (1, 0, ..., 0): g = xi . w = xi^0
    let g = Affine {
        c: c.time().clone(),
        s: e1.time().clone(),
        t: -e2.time().clone(),
    };
    let (s, t) = feasibility::find_point(&f, &g, &d1, &d2)?;
    let xi = &r1.point_at(&s) - &r2.point_at(&t);
    debug_assert!(causal_class(&xi).in_closed_past(), "witness {xi} not in the closed past cone");
    Some(Witness { s, t, xi })
}

pub fn later_region(r1: &Region, r2: &Region) -> bool {
    past_witness(r1, r2).is_none()
}

pub fn regions_disjoint(r1: &Region, r2: &Region) -> bool {
    !regions_intersect(r1, r2)
}

pub fn compare(r1: &Region, r2: &Region) -> Result<CompareResult> {
    if regions_intersect(r1, r2) {
        return Err(Error::OverlappingRegions { first: 0, second: 1 });
    }
    Ok(compare_unchecked(r1, r2))
}

pub(crate) fn compare_unchecked(r1: &Region, r2: &Region) -> CompareResult {
    CompareResult::from_relations(later_region(r1, r2), later_region(r2, r1))
}

/// Smallest index `i` with `regions[i] ⪰ regions[j]` for every other `j`.
pub fn latest_member(regions: &[Region]) -> Result<Option<usize>> {
    for i in 0..regions.len() {
        for j in i + 1..regions.len() {
            if regions_intersect(&regions[i], &regions[j]) {
                return Err(Error::OverlappingRegions { first: i, second: j });
            }
        }
    }
    Ok((0..regions.len()).find(|&i| {
        (0..regions.len()).all(|j| j == i || later_region(&regions[i], &regions[j]))
    }))
}

/// `Above` for every point of the region, checked on endpoints and the
/// recession direction (heights are affine along a piece).
pub fn region_side(region: &Region, plane: &Hyperplane) -> Option<Side> {
    let (ends, rec) = region.endpoints();
    let sides: Vec<Side> = ends.iter().map(|z| later_vs_hyperplane(z, plane)).collect();
    let slope = rec.map(|d| d.dot(&plane.normal));
    if sides.iter().all(|&s| s == Side::Above) && slope.as_ref().map_or(true, |k| !k.is_negative()) {
        return Some(Side::Above);
    }
    if sides.iter().all(|&s| s == Side::Below) && slope.as_ref().map_or(true, |k| !k.is_positive()) {
        return Some(Side::Below);
    }
    None
}

/// Range of `z . u` over the region: `(min, max)` with `None` for an infinite end.
fn height_range(region: &Region, u: &ExactVector) -> (Option<Rational>, Option<Rational>) {
    let (ends, rec) = region.endpoints();
    let vals: Vec<Rational> = ends.iter().map(|z| z.dot(u)).collect();
    let mut lo = vals.iter().min().cloned();
    let mut hi = vals.iter().max().cloned();
    if let Some(d) = rec {
        let k = d.dot(u);
        if k.is_positive() {
            hi = None;
        } else if k.is_negative() {
            lo = None;
        }
    }
    (lo, hi)
}

fn normal_candidates(r1: &Region, r2: &Region) -> Vec<ExactVector> {
    let dim = r1.dim();
    let w = ExactVector::time_unit(dim);
    let mut out = vec![w.clone()];
    let dirs: Vec<ExactVector> = [r1, r2]
        .iter()
        .filter_map(|r| match r {
            Region::Piece { piece } => Some(piece.parent.dir.clone()),
            Region::Point { .. } => None,
        })
        .collect();
    for e in &dirs {
        if let Ok(u) = project_orth(e, &w) {
            out.push(u);
        }
    }
    if let (Region::Piece { piece: p1 }, Region::Piece { piece: p2 }) = (r1, r2) {
        let (e1, e2) = (&p1.parent.dir, &p2.parent.dir);
        if !e1.is_parallel(e2) && gram(e1, e2).is_positive() {
            if let Ok(f2) = project_orth(e1, e2) {
                out.push(project_orth2(e1, &f2, &w));
            }
        }
        if let Ok(u) = direction_separator(e1, e2) {
            out.push(u);
        }
    }
    // tilt the time axis along the separation of representative points
    let (ends1, _) = r1.endpoints();
    let (ends2, _) = r2.endpoints();
    for a in &ends1 {
        for b in &ends2 {
            let xi = a - b;
            let spatial: Rational = xi.coords()[1..].iter().map(|c| c * c).sum();
            if spatial.is_zero() {
                continue;
            }
            let mut k = 0;
            while k < 64 {
                let c = rational::inv_pow2(k);
                if &c * &c * &spatial < rational::int(1) {
                    for c in [c.clone(), c / rational::int(2)] {
                        let mut coords = vec![rational::int(1)];
                        coords.extend(xi.coords()[1..].iter().map(|x| -(x * &c)));
                        out.push(ExactVector::new(coords).expect("dim >= 2"));
                    }
                    break;
                }
                k += 1;
            }
        }
    }
    // coarse grid of tilted frames
    let steps: Vec<Rational> = (-3..=3).map(|k| rational::frac(k, 4)).collect();
    let spatial_dims = dim - 1;
    let mut idx = vec![0usize; spatial_dims];
    'grid: loop {
        let mut coords = vec![rational::int(1)];
        coords.extend(idx.iter().map(|&i| steps[i].clone()));
        let u = ExactVector::new(coords).expect("dim >= 2");
        if causal_class(&u) == crate::minkowski::CausalClass::TimelikeFuture {
            out.push(u);
        }
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < steps.len() {
                continue 'grid;
            }
            *slot = 0;
        }
        break;
    }
    out
}

/// Searches for a spacelike hyperplane `Σ` with `r1 ⪰ Σ ⪰ r2`.
///
/// A `None` result says nothing about `r1 ⪰ r2`: for unbounded strings a
/// separating spacelike hyperplane is sufficient, not necessary.
pub fn separating_hyperplane(r1: &Region, r2: &Region) -> Result<Option<Hyperplane>> {
    if regions_intersect(r1, r2) {
        return Err(Error::OverlappingRegions { first: 0, second: 1 });
    }
    for u in normal_candidates(r1, r2) {
        if let Some(plane) = hyperplane_for_normal(r1, r2, &u) {
            return Ok(Some(plane));
        }
    }
    Ok(None)
}

/// Hyperplane with normal `u` strictly between the regions, if one exists.
pub fn hyperplane_for_normal(r1: &Region, r2: &Region, u: &ExactVector) -> Option<Hyperplane> {
    let (lo1, _) = height_range(r1, u);
    let (_, hi2) = height_range(r2, u);
    let (lo1, hi2) = (lo1?, hi2?);
    if lo1 <= hi2 {
        return None;
    }
    let h = (lo1 + hi2) / rational::int(2);
    let base = u.scale(&(h / u.norm_sq()));
    let plane = Hyperplane::new(base, u.clone()).ok()?;
    let verified = region_side(r1, &plane) == Some(Side::Above) && region_side(r2, &plane) == Some(Side::Below);
    verified.then_some(plane)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn v(c: &[i64]) -> ExactVector {
        ExactVector::from_ints(c)
    }

    fn ray(x: &[i64], e: &[i64]) -> StringGeom {
        StringGeom::new(v(x), v(e)).unwrap()
    }

    #[test]
    fn point_point_examples() {
        let x = v(&[1, 0, 0, 0]);
        let y = v(&[0, 0, 0, 0]);
        assert!(later_point_point(&x, &y));
        assert!(!later_point_point(&y, &x));
        let x = v(&[0, 1, 0, 0]);
        assert!(later_point_point(&x, &y) && later_point_point(&y, &x));
        assert!(!later_point_point(&y, &y));
    }

    #[test]
    fn hyperplane_side_examples() {
        let plane = Hyperplane::new(v(&[0, 0, 0, 0]), v(&[1, 0, 0, 0])).unwrap();
        assert_eq!(later_vs_hyperplane(&v(&[1, 5, 0, 0]), &plane), Side::Above);
        assert_eq!(later_vs_hyperplane(&v(&[0, 7, 3, 0]), &plane), Side::On);
        let plane = Hyperplane::new(v(&[1, 0, 0, 0]), v(&[2, 1, 0, 0])).unwrap();
        assert_eq!(later_vs_hyperplane(&v(&[0, 0, 0, 0]), &plane), Side::Below);
    }

    #[test]
    fn ray_vs_earlier_point() {
        let r1 = Region::string(&ray(&[0, 0, 0, 0], &[0, 1, 0, 0]));
        let r2 = Region::point(v(&[-1, 0, 0, 0]));
        assert!(later_region(&r1, &r2));
    }

    #[test]
    fn parallel_rays_offset_in_time() {
        let r1 = Region::string(&ray(&[3, 0, 0, 0], &[0, 1, 0, 0]));
        let r2 = Region::string(&ray(&[0, 0, 0, 0], &[0, 1, 0, 0]));
        assert!(later_region(&r1, &r2));
        let w = past_witness(&r2, &r1).expect("reversed order fails");
        assert!(causal_class(&w.xi).in_closed_past());
        // the witness difference has the form (-3, s - t, 0, 0) with |s - t| <= 3
        assert_eq!(w.xi.time(), &int(-3));
        assert!((&w.s - &w.t).abs() <= int(3));
    }

    #[test]
    fn tail_diving_into_the_past() {
        let s = ray(&[2, 0, 0, 1], &[-3, 0, 5, 0]);
        let sp = ray(&[0, 0, 0, 0], &[0, 0, 1, 0]);
        let tail = Region::piece(s.piece(int(2), None).unwrap());
        let r2 = Region::string(&sp);
        let w = past_witness(&tail, &r2).expect("tail enters the past of S'");
        assert!(causal_class(&w.xi).in_closed_past());
        assert!(later_region(&r2, &tail));
        // grid falsifier agrees: some point with parameter >= 2 on the tail is in the past
        let mut hit = false;
        for i in 0..100 {
            for j in 0..100 {
                let a = s.point_at(&(int(2) + frac(i, 10)));
                let b = sp.point_at(&frac(j, 2));
                if causal_class(&(&a - &b)).in_closed_past() {
                    hit = true;
                }
            }
        }
        assert!(hit);
    }

    #[test]
    fn compare_examples() {
        // parallel disjoint rays in a spacelike plane
        let a = Region::string(&ray(&[0, 0, 0, 0], &[0, 1, 0, 0]));
        let b = Region::string(&ray(&[0, 0, 1, 0], &[0, 1, 0, 0]));
        assert_eq!(compare(&a, &b).unwrap(), CompareResult::SpacelikeSeparated);
        // incomparable pair
        let s = Region::string(&ray(&[2, 0, 0, 1], &[-3, 0, 5, 0]));
        let sp = Region::string(&ray(&[0, 0, 0, 0], &[0, 0, 1, 0]));
        assert_eq!(compare(&s, &sp).unwrap(), CompareResult::Incomparable);
        // point above a ray
        let p = Region::point(v(&[5, 0, 0, 0]));
        let r = Region::string(&ray(&[0, 0, 0, 0], &[0, 1, 0, 0]));
        assert_eq!(compare(&p, &r).unwrap(), CompareResult::FirstLater);
        // overlap is rejected
        let q = Region::point(v(&[0, 3, 0, 0]));
        assert_eq!(compare(&q, &r), Err(Error::OverlappingRegions { first: 0, second: 1 }));
    }

    #[test]
    fn incomparable_pair_has_both_witnesses() {
        let s = ray(&[2, 0, 0, 1], &[-3, 0, 5, 0]);
        let sp = ray(&[0, 0, 0, 0], &[0, 0, 1, 0]);
        // base of S is in the timelike future of the base of S'
        assert_eq!(causal_class(&(&s.base - &sp.base)), crate::minkowski::CausalClass::TimelikeFuture);
        let w1 = past_witness(&Region::string(&s), &Region::string(&sp)).unwrap();
        let w2 = past_witness(&Region::string(&sp), &Region::string(&s)).unwrap();
        assert!(causal_class(&w1.xi).in_closed_past());
        assert!(causal_class(&w2.xi).in_closed_past());
    }

    #[test]
    fn latest_member_examples() {
        let pts: Vec<Region> = [0, 1, 2].iter().map(|&t| Region::point(v(&[t, 0, 0, 0]))).collect();
        assert_eq!(latest_member(&pts).unwrap(), Some(2));
        let single = vec![Region::string(&ray(&[0, 0, 0, 0], &[0, 1, 0, 0]))];
        assert_eq!(latest_member(&single).unwrap(), Some(0));
        // points on a common spacelike hyperplane: every one is latest, smallest index wins
        let flat: Vec<Region> = [0, 1, 2].iter().map(|&x| Region::point(v(&[0, x, 0, 0]))).collect();
        assert_eq!(latest_member(&flat).unwrap(), Some(0));
        let dup = vec![Region::point(v(&[0, 0, 0, 0])), Region::point(v(&[0, 0, 0, 0]))];
        assert!(latest_member(&dup).is_err());
    }

    #[test]
    fn separating_hyperplane_examples() {
        let r1 = Region::point(v(&[1, 0, 0, 0]));
        let r2 = Region::point(v(&[-1, 0, 0, 0]));
        let plane = separating_hyperplane(&r1, &r2).unwrap().unwrap();
        assert_eq!(plane.base, v(&[0, 0, 0, 0]));
        assert_eq!(plane.normal, v(&[1, 0, 0, 0]));
        // spacelike separated rays: witnesses both ways
        let a = Region::string(&ray(&[0, 0, 0, 0], &[0, 1, 0, 0]));
        let b = Region::string(&ray(&[0, 0, 1, 0], &[0, 1, 0, 0]));
        assert!(separating_hyperplane(&a, &b).unwrap().is_some());
        assert!(separating_hyperplane(&b, &a).unwrap().is_some());
        // no hyperplane can put an earlier region above
        assert!(separating_hyperplane(&r2, &r1).unwrap().is_none());
    }
}
