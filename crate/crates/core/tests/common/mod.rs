#![allow(dead_code)]

use causalchop::chop::strings_disjoint;
use causalchop::minkowski::{causal_class, is_spacelike, CausalClass, ExactVector};
use causalchop::order::{Region, StringGeom};
use causalchop::rational::{frac, int, Rational};
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::Rng;

pub fn rat(rng: &mut StdRng, max: i64) -> Rational {
    frac(rng.gen_range(-max..=max), rng.gen_range(1..=max))
}

pub fn small_int(rng: &mut StdRng, max: i64) -> Rational {
    int(rng.gen_range(-max..=max))
}

pub fn vector(rng: &mut StdRng, dim: usize, gen: impl Fn(&mut StdRng) -> Rational) -> ExactVector {
    ExactVector::new((0..dim).map(|_| gen(rng)).collect()).unwrap()
}

pub fn spacelike(rng: &mut StdRng, dim: usize, gen: impl Fn(&mut StdRng) -> Rational + Copy) -> ExactVector {
    loop {
        let v = vector(rng, dim, gen);
        if is_spacelike(&v) {
            return v;
        }
    }
}

pub fn string(rng: &mut StdRng, dim: usize, gen: impl Fn(&mut StdRng) -> Rational + Copy) -> StringGeom {
    StringGeom::new(vector(rng, dim, gen), spacelike(rng, dim, gen)).unwrap()
}

pub fn int_string(rng: &mut StdRng, dim: usize, max: i64) -> StringGeom {
    string(rng, dim, move |r| small_int(r, max))
}

/// Pairwise disjoint configuration of `n` strings with small integer data.
pub fn off_diagonal(rng: &mut StdRng, n: usize, dim: usize, max: i64) -> Vec<StringGeom> {
    loop {
        let config: Vec<StringGeom> = (0..n).map(|_| int_string(rng, dim, max)).collect();
        let ok = (0..n).all(|i| (i + 1..n).all(|j| strings_disjoint(&config[i], &config[j])));
        if ok {
            return config;
        }
    }
}

pub fn in_closed_past(xi: &ExactVector) -> bool {
    causal_class(xi).in_closed_past()
}

pub fn timelike_future(u: &ExactVector) -> bool {
    causal_class(u) == CausalClass::TimelikeFuture
}

pub fn to_f64(v: &ExactVector) -> Vec<f64> {
    v.coords().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}

pub fn load_config(text: &str) -> Vec<StringGeom> {
    #[derive(serde::Deserialize)]
    struct File {
        strings: Vec<StringGeom>,
    }
    serde_json::from_str::<File>(text).expect("fixture parses").strings
}

pub fn cyclic_triple() -> Vec<StringGeom> {
    load_config(include_str!("../fixtures/cyclic_triple.json"))
}

pub fn whole(s: &StringGeom) -> Region {
    Region::string(s)
}
