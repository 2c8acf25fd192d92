//! Exact emptiness test for `{f >= 0, g <= 0}` over a parameter box, where
//! `f` is a bivariate quadratic and `g` is affine.
//!
//! The box sides are points, closed intervals or closed half-lines. The
//! search maximizes `f` over the polygon `P = box ∩ {g <= 0}`: vertices,
//! critical points of `f` along each boundary line, the interior critical
//! point, and finally the behavior along recession directions of `P`,
//! decided on the polynomial coefficients. Every candidate is rational, so
//! the decision is exact and any nonempty answer comes with a point.

use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

/// Parameter domain of one side of the box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    Point(Rational),
    Closed(Rational, Rational),
    From(Rational),
}

impl Domain {
    pub fn lower(&self) -> &Rational {
        match self {
            Domain::Point(p) => p,
            Domain::Closed(lo, _) | Domain::From(lo) => lo,
        }
    }

    pub fn upper(&self) -> Option<&Rational> {
        match self {
            Domain::Point(p) => Some(p),
            Domain::Closed(_, hi) => Some(hi),
            Domain::From(_) => None,
        }
    }

    fn normalized(self) -> Self {
        match self {
            Domain::Closed(lo, hi) if lo == hi => Domain::Point(lo),
            other => other,
        }
    }
}

/// `c + s*x + t*y + ss*x^2 + st*x*y + tt*y^2`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadratic {
    pub c: Rational,
    pub s: Rational,
    pub t: Rational,
    pub ss: Rational,
    pub st: Rational,
    pub tt: Rational,
}

/// `c + s*x + t*y`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub c: Rational,
    pub s: Rational,
    pub t: Rational,
}

type Pt = (Rational, Rational);

impl Quadratic {
    pub fn eval(&self, s: &Rational, t: &Rational) -> Rational {
        &self.c + &self.s * s + &self.t * t + &self.ss * s * s + &self.st * s * t + &self.tt * t * t
    }

    fn form(&self, d: &Pt) -> Rational {
        &self.ss * &d.0 * &d.0 + &self.st * &d.0 * &d.1 + &self.tt * &d.1 * &d.1
    }

    fn bilinear(&self, a: &Pt, b: &Pt) -> Rational {
        let half = rational::frac(1, 2);
        &self.ss * &a.0 * &b.0 + &self.st * &half * (&a.0 * &b.1 + &a.1 * &b.0) + &self.tt * &a.1 * &b.1
    }

    fn grad_dot(&self, p: &Pt, d: &Pt) -> Rational {
        let two = rational::int(2);
        let gs = &two * &self.ss * &p.0 + &self.st * &p.1 + &self.s;
        let gt = &self.st * &p.0 + &two * &self.tt * &p.1 + &self.t;
        gs * &d.0 + gt * &d.1
    }

    /// Univariate restriction `lambda -> f(p + lambda d)` as `(c0, c1, c2)`.
    fn along(&self, p: &Pt, d: &Pt) -> [Rational; 3] {
        [self.eval(&p.0, &p.1), self.grad_dot(p, d), self.form(d)]
    }
}

impl Affine {
    pub fn eval(&self, s: &Rational, t: &Rational) -> Rational {
        &self.c + &self.s * s + &self.t * t
    }
}

fn eval_poly(c: &[Rational; 3], x: &Rational) -> Rational {
    &c[0] + &c[1] * x + &c[2] * x * x
}

/// Point of `[lo, hi]` (or `[lo, inf)`) where `c0 + c1 x + c2 x^2 >= 0`.
fn nonneg_on_interval(c: &[Rational; 3], lo: &Rational, hi: Option<&Rational>) -> Option<Rational> {
    if !eval_poly(c, lo).is_negative() {
        return Some(lo.clone());
    }
    if let Some(hi) = hi {
        if !eval_poly(c, hi).is_negative() {
            return Some(hi.clone());
        }
    }
    if c[2].is_negative() {
        let vertex = -&c[1] / (rational::int(2) * &c[2]);
        let inside = &vertex > lo && hi.map_or(true, |h| &vertex < h);
        if inside && !eval_poly(c, &vertex).is_negative() {
            return Some(vertex);
        }
    }
    if hi.is_none() && (c[2].is_positive() || (c[2].is_zero() && c[1].is_positive())) {
        return Some(grow_until_nonneg(|x| eval_poly(c, x), lo));
    }
    None
}

/// Smallest `start + 2^k` (k >= 0) where `value` is nonnegative; the caller
/// guarantees divergence to `+inf`.
fn grow_until_nonneg(value: impl Fn(&Rational) -> Rational, start: &Rational) -> Rational {
    let mut step = Rational::one();
    loop {
        let x = start + &step;
        if !value(&x).is_negative() {
            return x;
        }
        step = &step * rational::int(2);
    }
}

/// Constraint `a . (s,t) <= b`.
#[derive(Debug, Clone)]
struct HalfPlane {
    a: Pt,
    b: Rational,
}

impl HalfPlane {
    fn slack(&self, p: &Pt) -> Rational {
        &self.b - (&self.a.0 * &p.0 + &self.a.1 * &p.1)
    }

    fn contains(&self, p: &Pt) -> bool {
        !self.slack(p).is_negative()
    }
}

/// Searches for `(s, t)` in `ds x dt` with `g <= 0` and `f >= 0`.
pub fn find_point(f: &Quadratic, g: &Affine, ds: &Domain, dt: &Domain) -> Option<Pt> {
    let ds = ds.clone().normalized();
    let dt = dt.clone().normalized();
    match (&ds, &dt) {
        (Domain::Point(s), Domain::Point(t)) => {
            let ok = !g.eval(s, t).is_positive() && !f.eval(s, t).is_negative();
            ok.then(|| (s.clone(), t.clone()))
        }
        (Domain::Point(s), _) => {
            let p = (s.clone(), Rational::zero());
            let d = (Rational::zero(), Rational::one());
            search_line(f, g, &p, &d, &dt).map(|x| (s.clone(), x))
        }
        (_, Domain::Point(t)) => {
            let p = (Rational::zero(), t.clone());
            let d = (Rational::one(), Rational::zero());
            search_line(f, g, &p, &d, &ds).map(|x| (x, t.clone()))
        }
        _ => search_plane(f, g, &ds, &dt),
    }
}

/// One free parameter: points `p + x d` with `x` in `dom`.
fn search_line(f: &Quadratic, g: &Affine, p: &Pt, d: &Pt, dom: &Domain) -> Option<Rational> {
    let mut lo = dom.lower().clone();
    let mut hi = dom.upper().cloned();
    let g0 = g.eval(&p.0, &p.1);
    let g1 = &g.s * &d.0 + &g.t * &d.1;
    if g1.is_zero() {
        if g0.is_positive() {
            return None;
        }
    } else {
        let root = -&g0 / &g1;
        if g1.is_positive() {
            hi = Some(match hi {
                Some(h) if h < root => h,
                _ => root,
            });
        } else if root > lo {
            lo = root;
        }
    }
    if let Some(h) = &hi {
        if h < &lo {
            return None;
        }
    }
    let c = f.along(p, d);
    nonneg_on_interval(&c, &lo, hi.as_ref())
}

fn search_plane(f: &Quadratic, g: &Affine, ds: &Domain, dt: &Domain) -> Option<Pt> {
    let zero = Rational::zero;
    let one = Rational::one;
    let mut planes = vec![
        HalfPlane { a: (-one(), zero()), b: -ds.lower().clone() },
        HalfPlane { a: (zero(), -one()), b: -dt.lower().clone() },
    ];
    if let Some(hi) = ds.upper() {
        planes.push(HalfPlane { a: (one(), zero()), b: hi.clone() });
    }
    if let Some(hi) = dt.upper() {
        planes.push(HalfPlane { a: (zero(), one()), b: hi.clone() });
    }
    if g.s.is_zero() && g.t.is_zero() {
        if g.c.is_positive() {
            return None;
        }
    } else {
        planes.push(HalfPlane { a: (g.s.clone(), g.t.clone()), b: -g.c.clone() });
    }

    let mut vertices: Vec<Pt> = Vec::new();
    for (k, plane) in planes.iter().enumerate() {
        let Some((p, d, lo, hi)) = feasible_edge(&planes, k, plane) else {
            continue;
        };
        let at = |x: &Rational| (&p.0 + x * &d.0, &p.1 + x * &d.1);
        vertices.push(at(&lo));
        if let Some(h) = &hi {
            vertices.push(at(h));
        }
        let c = f.along(&p, &d);
        if let Some(x) = nonneg_on_interval(&c, &lo, hi.as_ref()) {
            return Some(at(&x));
        }
    }
    if vertices.is_empty() {
        return None;
    }

    // interior critical point
    let det = rational::int(4) * &f.ss * &f.tt - &f.st * &f.st;
    if !det.is_zero() {
        let two = rational::int(2);
        // [2ss st; st 2tt] [s t]^T = -[s_coef t_coef]^T
        let s = (-&f.s * &two * &f.tt + &f.t * &f.st) / &det;
        let t = (-&f.t * &two * &f.ss + &f.s * &f.st) / &det;
        let p = (s, t);
        if planes.iter().all(|h| h.contains(&p)) && !f.eval(&p.0, &p.1).is_negative() {
            return Some(p);
        }
    }

    // recession directions of P
    let mut gens: Vec<Pt> = Vec::new();
    if ds.upper().is_none() {
        gens.push((one(), zero()));
    }
    if dt.upper().is_none() {
        gens.push((zero(), one()));
    }
    let gslope = |d: &Pt| &g.s * &d.0 + &g.t * &d.1;
    let mut cone: Vec<Pt> = gens.iter().filter(|d| !gslope(d).is_positive()).cloned().collect();
    if gens.len() == 2 {
        let v1 = gslope(&gens[0]);
        let v2 = gslope(&gens[1]);
        if v1.sign_differs(&v2) {
            let (a, b) = if v1.is_negative() { (v2.clone(), -v1) } else { (-v2, v1.clone()) };
            cone.push((&a * &gens[0].0 + &b * &gens[1].0, &a * &gens[0].1 + &b * &gens[1].1));
        }
    }
    cone.sort();
    cone.dedup();
    if cone.is_empty() {
        return None;
    }
    let start = vertices[0].clone();
    let march = |p: &Pt, d: &Pt| {
        let c = f.along(p, d);
        let x = grow_until_nonneg(|x| eval_poly(&c, x), &Rational::zero());
        (&p.0 + &x * &d.0, &p.1 + &x * &d.1)
    };

    let mut flat: Vec<Pt> = Vec::new();
    for d in &cone {
        let q = f.form(d);
        if q.is_positive() {
            return Some(march(&start, d));
        }
        if q.is_zero() {
            flat.push(d.clone());
        }
    }
    if cone.len() == 2 {
        let (d1, d2) = (&cone[0], &cone[1]);
        let q12 = f.bilinear(d1, d2);
        let q22 = f.form(d2);
        if q22.is_negative() {
            let mu = -&q12 / &q22;
            if mu.is_positive() {
                let d = (&d1.0 + &mu * &d2.0, &d1.1 + &mu * &d2.1);
                let q = f.form(&d);
                if q.is_positive() {
                    return Some(march(&start, &d));
                }
                if q.is_zero() {
                    flat.push(d);
                }
            }
        }
    }
    for d in &flat {
        for v in &vertices {
            if f.grad_dot(v, d).is_positive() {
                return Some(march(v, d));
            }
        }
    }
    None
}

/// Feasible portion of the boundary line of `planes[k]`, as `p + x d` with
/// `x` in `[lo, hi]` (`hi = None` means unbounded).
fn feasible_edge(
    planes: &[HalfPlane],
    k: usize,
    plane: &HalfPlane,
) -> Option<(Pt, Pt, Rational, Option<Rational>)> {
    let (a0, a1) = (&plane.a.0, &plane.a.1);
    let d: Pt = (-a1.clone(), a0.clone());
    let p: Pt = if !a0.is_zero() {
        (&plane.b / a0, Rational::zero())
    } else {
        (Rational::zero(), &plane.b / a1)
    };
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for (j, other) in planes.iter().enumerate() {
        if j == k {
            continue;
        }
        // other.a . (p + x d) <= other.b  <=>  x * rate <= slack
        let rate = &other.a.0 * &d.0 + &other.a.1 * &d.1;
        let slack = other.slack(&p);
        if rate.is_zero() {
            if slack.is_negative() {
                return None;
            }
        } else {
            let bound = &slack / &rate;
            if rate.is_positive() {
                hi = Some(match hi {
                    Some(h) if h < bound => h,
                    _ => bound,
                });
            } else {
                lo = Some(match lo {
                    Some(l) if l > bound => l,
                    _ => bound,
                });
            }
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) => (l <= h).then(|| (p, d, l, Some(h))),
        (Some(l), None) => Some((p, d, l, None)),
        (None, Some(h)) => {
            // flip so the parameter is bounded below
            let d = (-d.0, -d.1);
            Some((p, d, -h, None))
        }
        (None, None) => None,
    }
}

trait SignDiffers {
    fn sign_differs(&self, other: &Self) -> bool;
}

impl SignDiffers for Rational {
    fn sign_differs(&self, other: &Self) -> bool {
        (self.is_negative() && other.is_positive()) || (self.is_positive() && other.is_negative())
    }
}
