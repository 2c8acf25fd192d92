//! Choppings of n strings such that every tuple of pieces has a latest member.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chop::diagonal::first_intersecting_pair;
use crate::chop::tails::{ordered_cones, tail_cut, DirectionCone};
use crate::error::{Error, Result};
use crate::minkowski::same_direction;
use crate::order::{later_region, latest_member, Piece, Region, StringGeom};
use crate::rational::{self, Rational};

pub const DEFAULT_REFINE_LIMIT: u32 = 12;
const CONE_ROUNDS: u32 = 48;

/// Cut parameters `0 = s⁰ < s¹ < ... < s^N` per string. Piece `α < N` is
/// `[s^α, s^{α+1}]`, piece `N` is the tail `[s^N, inf)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chopping {
    pub cuts: Vec<Vec<String>>,
}

impl Chopping {
    pub fn trivial(n: usize) -> Self {
        Self::from_rationals(&vec![vec![Rational::zero()]; n])
    }

    pub fn from_rationals(cuts: &[Vec<Rational>]) -> Self {
        Chopping {
            cuts: cuts.iter().map(|c| c.iter().map(rational::format).collect()).collect(),
        }
    }

    pub fn rationals(&self) -> Result<Vec<Vec<Rational>>> {
        let parsed: Vec<Vec<Rational>> = self
            .cuts
            .iter()
            .map(|c| c.iter().map(|s| rational::parse(s)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        for (i, c) in parsed.iter().enumerate() {
            if c.first().map_or(true, |s| !s.is_zero()) {
                return Err(Error::InvalidChopping(format!("cuts of string {i} must start at 0")));
            }
            if c.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidChopping(format!("cuts of string {i} are not increasing")));
            }
        }
        Ok(parsed)
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn piece_counts(&self) -> Vec<usize> {
        self.cuts.iter().map(Vec::len).collect()
    }

    pub fn validate(&self, config: &[StringGeom]) -> Result<Vec<Vec<Rational>>> {
        if self.cuts.len() != config.len() {
            return Err(Error::InvalidChopping(format!(
                "{} cut lists for {} strings",
                self.cuts.len(),
                config.len()
            )));
        }
        self.rationals()
    }

    /// Inserts extra cuts, keeping each list sorted and free of duplicates.
    pub fn refined(&self, extra: &[Vec<Rational>]) -> Result<Self> {
        let mut cuts = self.rationals()?;
        for (c, add) in cuts.iter_mut().zip(extra) {
            for s in add {
                if s.is_positive() && !c.contains(s) {
                    c.push(s.clone());
                }
            }
            c.sort();
        }
        Ok(Self::from_rationals(&cuts))
    }
}

pub(crate) fn piece_of(s: &StringGeom, cuts: &[Rational], alpha: usize) -> Piece {
    let lo = cuts[alpha].clone();
    let hi = cuts.get(alpha + 1).cloned();
    Piece { parent: s.clone(), lo, hi }
}

/// All tuples `(α_1, ..., α_n)` in lexicographic order.
pub fn all_tuples(counts: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = counts.iter().product();
    (0..total).map(|k| tuple_at(counts, k)).collect()
}

fn tuple_at(counts: &[usize], mut k: usize) -> Vec<usize> {
    let mut t = vec![0; counts.len()];
    for i in (0..counts.len()).rev() {
        t[i] = k % counts[i];
        k /= counts[i];
    }
    t
}

/// Latest member index per piece tuple.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LatestTable {
    pub entries: BTreeMap<Vec<usize>, usize>,
}

#[derive(Serialize, Deserialize)]
struct LatestEntry {
    tuple: Vec<usize>,
    index: usize,
}

impl Serialize for LatestTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<LatestEntry> = self
            .entries
            .iter()
            .map(|(t, &i)| LatestEntry { tuple: t.clone(), index: i })
            .collect();
        list.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatestTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let list = Vec::<LatestEntry>::deserialize(d)?;
        let mut entries = BTreeMap::new();
        for e in list {
            if entries.insert(e.tuple.clone(), e.index).is_some() {
                return Err(serde::de::Error::custom(format!("duplicate tuple {:?}", e.tuple)));
            }
        }
        Ok(LatestTable { entries })
    }
}

impl LatestTable {
    pub fn get(&self, tuple: &[usize]) -> Option<usize> {
        self.entries.get(tuple).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChopOptions {
    pub refine_limit: u32,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for ChopOptions {
    fn default() -> Self {
        ChopOptions { refine_limit: DEFAULT_REFINE_LIMIT, jobs: None }
    }
}

/// Auxiliary data backing the tail cuts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChopWitnesses {
    /// Direction cone per string, absent when no tail cut was needed.
    pub cones: Vec<Option<DirectionCone>>,
    #[serde(with = "rational::serde_str_vec")]
    pub tail_cuts: Vec<Rational>,
    pub rounds: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub cuts: Vec<Vec<String>>,
    pub latest: LatestTable,
    pub witnesses: ChopWitnesses,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChopOutcome {
    pub chopping: Chopping,
    pub table: LatestTable,
    pub witnesses: ChopWitnesses,
}

impl ChopOutcome {
    pub fn certificate(&self) -> Certificate {
        Certificate {
            cuts: self.chopping.cuts.clone(),
            latest: self.table.clone(),
            witnesses: self.witnesses.clone(),
        }
    }
}

impl Certificate {
    pub fn chopping(&self) -> Chopping {
        Chopping { cuts: self.cuts.clone() }
    }
}

fn run_in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

pub fn chop_n(config: &[StringGeom], opts: &ChopOptions) -> Result<ChopOutcome> {
    if let Some((first, second)) = first_intersecting_pair(config) {
        return Err(Error::OnDiagonal { first, second });
    }
    let n = config.len();
    let wholes: Vec<Region> = config.iter().map(Region::string).collect();
    if let Some(i) = latest_member(&wholes)? {
        let mut entries = BTreeMap::new();
        entries.insert(vec![0; n], i);
        return Ok(ChopOutcome {
            chopping: Chopping::trivial(n),
            table: LatestTable { entries },
            witnesses: ChopWitnesses {
                cones: vec![None; n],
                tail_cuts: vec![Rational::zero(); n],
                rounds: 0,
            },
        });
    }
    run_in_pool(opts.jobs, || refine(config, opts))
}

/// Group representative per string: index of the first string with the same direction.
fn direction_groups(config: &[StringGeom]) -> (Vec<usize>, Vec<usize>) {
    let mut reps: Vec<usize> = Vec::new();
    let mut group = Vec::with_capacity(config.len());
    for (i, s) in config.iter().enumerate() {
        match reps.iter().position(|&r| same_direction(&config[r].dir, &s.dir)) {
            Some(g) => group.push(g),
            None => {
                group.push(reps.len());
                reps.push(i);
            }
        }
    }
    (reps, group)
}

type PieceKey = (usize, Rational, Option<Rational>);

fn refine(config: &[StringGeom], opts: &ChopOptions) -> Result<ChopOutcome> {
    let n = config.len();
    let (reps, group) = direction_groups(config);
    let dirs: Vec<_> = reps.iter().map(|&r| config[r].dir.clone()).collect();
    let cones = ordered_cones(&dirs, CONE_ROUNDS)?;
    let tail_cuts: Vec<Rational> = config
        .iter()
        .zip(&group)
        .map(|(s, &g)| tail_cut(s, &cones[g]))
        .collect::<Result<_>>()?;
    let mut cuts: Vec<Vec<Rational>> = tail_cuts.iter().map(|s| vec![Rational::zero(), s.clone()]).collect();
    let mut cache: HashMap<(PieceKey, PieceKey), bool> = HashMap::new();

    for round in 0..=opts.refine_limit {
        let keys: Vec<Vec<PieceKey>> = (0..n)
            .map(|i| {
                (0..cuts[i].len())
                    .map(|a| (i, cuts[i][a].clone(), cuts[i].get(a + 1).cloned()))
                    .collect()
            })
            .collect();
        let missing: Vec<(PieceKey, PieceKey)> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .flat_map(|(i, j)| {
                let keys = &keys;
                keys[i].iter().flat_map(move |a| keys[j].iter().map(move |b| (a.clone(), b.clone())))
            })
            .filter(|k| !cache.contains_key(k))
            .collect();
        let computed: Vec<((PieceKey, PieceKey), bool)> = missing
            .into_par_iter()
            .map(|(a, b)| {
                let ra = Region::piece(Piece { parent: config[a.0].clone(), lo: a.1.clone(), hi: a.2.clone() });
                let rb = Region::piece(Piece { parent: config[b.0].clone(), lo: b.1.clone(), hi: b.2.clone() });
                let later = later_region(&ra, &rb);
                ((a, b), later)
            })
            .collect();
        cache.extend(computed);

        // later[i][j][α][β]
        let later: Vec<Vec<Vec<Vec<bool>>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            return Vec::new();
                        }
                        keys[i]
                            .iter()
                            .map(|a| keys[j].iter().map(|b| cache[&(a.clone(), b.clone())]).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let counts: Vec<usize> = cuts.iter().map(Vec::len).collect();
        let total: usize = counts.iter().product();
        let results: Vec<(Vec<usize>, Option<usize>)> = (0..total)
            .into_par_iter()
            .map(|k| {
                let t = tuple_at(&counts, k);
                let idx = (0..n).find(|&i| (0..n).all(|j| j == i || later[i][j][t[i]][t[j]]));
                (t, idx)
            })
            .collect();
        let failing: Vec<&Vec<usize>> = results.iter().filter(|(_, i)| i.is_none()).map(|(t, _)| t).collect();
        if failing.is_empty() {
            let entries = results.into_iter().map(|(t, i)| (t, i.expect("all assigned"))).collect();
            return Ok(ChopOutcome {
                chopping: Chopping::from_rationals(&cuts),
                table: LatestTable { entries },
                witnesses: ChopWitnesses {
                    cones: group.iter().map(|&g| Some(cones[g].clone())).collect(),
                    tail_cuts,
                    rounds: round,
                },
            });
        }
        if round == opts.refine_limit {
            return Err(Error::RefinementLimitExceeded {
                tuple: failing[0].clone(),
                rounds: opts.refine_limit,
            });
        }
        // bisect every finite piece in a failing tuple, push tails outward
        let mut marked = vec![vec![false; 0]; n];
        for i in 0..n {
            marked[i] = vec![false; counts[i]];
        }
        for t in &failing {
            for i in 0..n {
                marked[i][t[i]] = true;
            }
        }
        for i in 0..n {
            let mut add = Vec::new();
            for (a, &m) in marked[i].iter().enumerate() {
                if !m {
                    continue;
                }
                match cuts[i].get(a + 1) {
                    Some(hi) => add.push((&cuts[i][a] + hi) / rational::int(2)),
                    None => add.push(&cuts[i][a] * rational::int(2)),
                }
            }
            cuts[i].extend(add);
            cuts[i].sort();
        }
    }
    unreachable!("loop returns on the final round")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TupleStatus {
    Pass,
    /// The recorded index is not later than this member.
    Fail { against: usize },
    /// Recorded index is out of range.
    BadIndex,
    MissingTuple,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleCheck {
    pub tuple: Vec<usize>,
    pub index: Option<usize>,
    #[serde(flatten)]
    pub status: TupleStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoppingReport {
    pub all_pass: bool,
    pub checked: usize,
    pub failures: usize,
    pub chopping_error: Option<String>,
    /// Tuples in the table that do not belong to the chopping.
    pub unexpected: Vec<Vec<usize>>,
    pub tuples: Vec<TupleCheck>,
}

/// Re-verifies every table entry with the decision procedure.
pub fn verify_chopping(config: &[StringGeom], chopping: &Chopping, table: &LatestTable) -> ChoppingReport {
    let cuts = match chopping.validate(config) {
        Ok(c) => c,
        Err(e) => {
            return ChoppingReport {
                all_pass: false,
                checked: 0,
                failures: 1,
                chopping_error: Some(e.to_string()),
                unexpected: Vec::new(),
                tuples: Vec::new(),
            }
        }
    };
    let n = config.len();
    let counts: Vec<usize> = cuts.iter().map(Vec::len).collect();
    let tuples: Vec<TupleCheck> = all_tuples(&counts)
        .into_par_iter()
        .map(|t| {
            let Some(i) = table.get(&t) else {
                return TupleCheck { tuple: t, index: None, status: TupleStatus::MissingTuple };
            };
            if i >= n {
                return TupleCheck { tuple: t, index: Some(i), status: TupleStatus::BadIndex };
            }
            let region = |k: usize| Region::piece(piece_of(&config[k], &cuts[k], t[k]));
            let top = region(i);
            let status = match (0..n).find(|&j| j != i && !later_region(&top, &region(j))) {
                Some(j) => TupleStatus::Fail { against: j },
                None => TupleStatus::Pass,
            };
            TupleCheck { tuple: t, index: Some(i), status }
        })
        .collect();
    let unexpected: Vec<Vec<usize>> = table
        .entries
        .keys()
        .filter(|t| t.len() != n || t.iter().zip(&counts).any(|(a, c)| a >= c))
        .cloned()
        .collect();
    let failures = tuples.iter().filter(|c| c.status != TupleStatus::Pass).count() + unexpected.len();
    ChoppingReport {
        all_pass: failures == 0,
        checked: tuples.len(),
        failures,
        chopping_error: None,
        unexpected,
        tuples,
    }
}

/// Latest-member table for a given chopping, computed directly.
pub fn table_for(config: &[StringGeom], chopping: &Chopping) -> Result<Option<LatestTable>> {
    let cuts = chopping.validate(config)?;
    let counts: Vec<usize> = cuts.iter().map(Vec::len).collect();
    let rows: Vec<(Vec<usize>, Option<usize>)> = all_tuples(&counts)
        .into_par_iter()
        .map(|t| {
            let regions: Vec<Region> = (0..config.len())
                .map(|k| Region::piece(piece_of(&config[k], &cuts[k], t[k])))
                .collect();
            let idx = latest_member(&regions).ok().flatten();
            (t, idx)
        })
        .collect();
    if rows.iter().any(|(_, i)| i.is_none()) {
        return Ok(None);
    }
    Ok(Some(LatestTable {
        entries: rows.into_iter().map(|(t, i)| (t, i.expect("checked"))).collect(),
    }))
}
