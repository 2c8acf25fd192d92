//! Reduced randomized versions of the verification suites, seeded from the command line.

use causalchop::chop::multi::{verify_chopping, ChopOptions};
use causalchop::chop::tails::direction_separator;
use causalchop::chop::two::chop_two;
use causalchop::chop::{chop_n, strings_disjoint};
use causalchop::minkowski::{causal_class, dual_witness, later_direction, CausalClass, ExactVector};
use causalchop::order::past_witness;
use causalchop::rational::{frac, int};
use causalchop::wick::{t_product_closed, t_product_recursive};
use causalchop::{compare, CompareResult, Rational, Region, StringGeom};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Suite {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn rat(rng: &mut StdRng) -> Rational {
    frac(rng.gen_range(-12..=12), rng.gen_range(1..=4))
}

fn vector(rng: &mut StdRng, dim: usize, max: i64) -> ExactVector {
    ExactVector::new((0..dim).map(|_| int(rng.gen_range(-max..=max))).collect()).unwrap()
}

fn string(rng: &mut StdRng, dim: usize, max: i64) -> StringGeom {
    loop {
        let e = vector(rng, dim, max);
        if causal_class(&e) == CausalClass::Spacelike {
            return StringGeom::new(vector(rng, dim, max), e).unwrap();
        }
    }
}

fn off_diagonal(rng: &mut StdRng, n: usize, dim: usize) -> Vec<StringGeom> {
    loop {
        let config: Vec<StringGeom> = (0..n).map(|_| string(rng, dim, 4)).collect();
        let disjoint = (0..n).all(|i| (i + 1..n).all(|j| strings_disjoint(&config[i], &config[j])));
        if disjoint {
            return config;
        }
    }
}

fn posteriority(rng: &mut StdRng) -> Suite {
    let mut bad = 0;
    for _ in 0..100 {
        let a = Region::string(&string(rng, 4, 5));
        let b = Region::point(ExactVector::new((0..4).map(|_| rat(rng)).collect()).unwrap());
        if let Some(w) = past_witness(&a, &b) {
            let xi = &a.point_at(&w.s) - &b.point_at(&w.t);
            if xi != w.xi || !causal_class(&xi).in_closed_past() {
                bad += 1;
            }
        }
    }
    Suite { name: "posteriority", pass: bad == 0, detail: format!("100 pairs, {bad} invalid witnesses") }
}

fn two_strings(rng: &mut StdRng) -> Suite {
    let (mut done, mut bad) = (0, 0);
    while done < 20 {
        let (s, sp) = (string(rng, 4, 4), string(rng, 4, 4));
        if !strings_disjoint(&s, &sp)
            || compare(&Region::string(&s), &Region::string(&sp)).ok() != Some(CompareResult::Incomparable)
        {
            continue;
        }
        done += 1;
        if !chop_two(&s, &sp).map_or(false, |r| r.verify(&s, &sp)) {
            bad += 1;
        }
    }
    Suite { name: "chop_two", pass: bad == 0, detail: format!("{done} incomparable pairs, {bad} failures") }
}

fn n_strings(rng: &mut StdRng, opts: &ChopOptions) -> Suite {
    let mut bad = 0;
    for _ in 0..5 {
        let config = off_diagonal(rng, 3, 3);
        let ok = chop_n(&config, opts).map_or(false, |o| verify_chopping(&config, &o.chopping, &o.table).all_pass);
        let wick = t_product_recursive(&config, opts).ok() == t_product_closed(&config).ok();
        if !ok || !wick {
            bad += 1;
        }
    }
    Suite { name: "chop_n+wick", pass: bad == 0, detail: format!("5 configurations, {bad} failures") }
}

fn separators(rng: &mut StdRng) -> Suite {
    let (mut done, mut bad) = (0, 0);
    while done < 50 {
        let (e, ep) = (string(rng, 4, 5).dir, string(rng, 4, 5).dir);
        if !later_direction(&e, &ep) {
            continue;
        }
        done += 1;
        let ok = direction_separator(&e, &ep).map_or(false, |u| {
            causal_class(&u) == CausalClass::TimelikeFuture && u.dot(&e) > int(0) && u.dot(&ep) < int(0)
        });
        if !ok {
            bad += 1;
        }
    }
    Suite { name: "direction_separator", pass: bad == 0, detail: format!("{done} pairs, {bad} failures") }
}

fn duality(rng: &mut StdRng) -> Suite {
    let mut bad = 0;
    for _ in 0..200 {
        let xi = ExactVector::new((0..4).map(|_| rat(rng)).collect()).unwrap();
        let inside = causal_class(&xi).in_closed_future();
        let ok = match dual_witness(&xi) {
            None => inside,
            Some(u) => !inside && causal_class(&u) == CausalClass::TimelikeFuture && u.dot(&xi) < int(0),
        };
        if !ok {
            bad += 1;
        }
    }
    Suite { name: "self_duality", pass: bad == 0, detail: format!("200 vectors, {bad} failures") }
}

pub fn run(seed: u64, opts: &ChopOptions) -> Vec<Suite> {
    let mut rng = StdRng::seed_from_u64(seed);
    vec![
        posteriority(&mut rng),
        two_strings(&mut rng),
        n_strings(&mut rng, opts),
        separators(&mut rng),
        duality(&mut rng),
    ]
}
