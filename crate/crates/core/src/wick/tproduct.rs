//! Time-ordered products of linear string fields.
//!
//! The closed form sums over contraction graphs with Feynman propagators. The
//! recursive form rebuilds the same expression from a chopping: on each piece
//! tuple the latest field is pulled out to the left, the remainder is expanded
//! by recursion, and two-point contractions against the latest piece become
//! time-ordered ones. Summing over the pieces of every string removes the
//! piece labels again.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::chop::diagonal::first_intersecting_pair;
use crate::chop::multi::{all_tuples, chop_n, piece_of, verify_chopping, ChopOptions, Chopping, LatestTable};
use crate::error::{Error, Result};
use crate::order::{later_region, Region, StringGeom};
use crate::rational::Rational;
use crate::wick::expression::{FieldSymbol, Monomial, PropKind, Propagator, WickExpression};
use crate::wick::graphs::enumerate_graphs;

fn check_off_diagonal(config: &[StringGeom]) -> Result<()> {
    match first_intersecting_pair(config) {
        Some((first, second)) => Err(Error::OnDiagonal { first, second }),
        None => Ok(()),
    }
}

pub fn t_product_closed(config: &[StringGeom]) -> Result<WickExpression> {
    check_off_diagonal(config)?;
    Ok(closed_form(config.len()))
}

/// `Σ_G Π ⟨T φ(s) φ(r)⟩ :φ(externals):` over vertices `1..=n`.
pub fn closed_form(n: usize) -> WickExpression {
    let mut e = WickExpression::zero();
    for g in enumerate_graphs(n) {
        let props = g
            .internal
            .iter()
            .map(|&(s, r)| Propagator::feynman(FieldSymbol::whole(s), FieldSymbol::whole(r)))
            .collect();
        let normal = g.external.iter().map(|&v| FieldSymbol::whole(v)).collect();
        e.add_term(Rational::from_integer(1.into()), Monomial::new(props, normal));
    }
    e
}

pub fn t_product_recursive(config: &[StringGeom], opts: &ChopOptions) -> Result<WickExpression> {
    check_off_diagonal(config)?;
    let verts: Vec<usize> = (0..config.len()).collect();
    Recursion::new(config, opts).whole(&verts)
}

/// Recursive expansion using a prescribed top-level chopping and table; the
/// sub-configurations are chopped afresh.
pub fn t_product_with_chopping(
    config: &[StringGeom],
    chopping: &Chopping,
    table: &LatestTable,
    opts: &ChopOptions,
) -> Result<WickExpression> {
    check_off_diagonal(config)?;
    let verts: Vec<usize> = (0..config.len()).collect();
    Recursion::new(config, opts).expand(&verts, chopping, table)
}

/// Verifies both tables, then compares the recursive expansions.
pub fn chopping_independence_check(
    config: &[StringGeom],
    a: (&Chopping, &LatestTable),
    b: (&Chopping, &LatestTable),
    opts: &ChopOptions,
) -> Result<bool> {
    for (label, (chopping, table)) in [("first", a), ("second", b)] {
        let report = verify_chopping(config, chopping, table);
        if !report.all_pass {
            return Err(Error::InvalidChopping(match report.chopping_error {
                Some(e) => format!("{label} chopping: {e}"),
                None => format!("{label} latest table fails on {} tuples", report.failures),
            }));
        }
    }
    let ea = t_product_with_chopping(config, a.0, a.1, opts)?;
    let eb = t_product_with_chopping(config, b.0, b.1, opts)?;
    Ok(ea == eb)
}

struct Recursion<'a> {
    config: &'a [StringGeom],
    opts: &'a ChopOptions,
    memo: HashMap<Vec<usize>, WickExpression>,
}

impl<'a> Recursion<'a> {
    fn new(config: &'a [StringGeom], opts: &'a ChopOptions) -> Self {
        Recursion { config, opts, memo: HashMap::new() }
    }

    /// T-product of the whole strings `verts` (indices into the configuration).
    fn whole(&mut self, verts: &[usize]) -> Result<WickExpression> {
        match verts {
            [] => return Ok(WickExpression::one()),
            [v] => {
                return Ok(WickExpression::monomial(
                    Rational::from_integer(1.into()),
                    Monomial::new(vec![], vec![FieldSymbol::whole(v + 1)]),
                ))
            }
            _ => {}
        }
        if let Some(e) = self.memo.get(verts) {
            return Ok(e.clone());
        }
        let sub: Vec<StringGeom> = verts.iter().map(|&v| self.config[v].clone()).collect();
        let out = chop_n(&sub, self.opts)?;
        let e = self.expand(verts, &out.chopping, &out.table)?;
        self.memo.insert(verts.to_vec(), e.clone());
        Ok(e)
    }

    fn expand(&mut self, verts: &[usize], chopping: &Chopping, table: &LatestTable) -> Result<WickExpression> {
        let sub: Vec<StringGeom> = verts.iter().map(|&v| self.config[v].clone()).collect();
        let cuts = chopping.validate(&sub)?;
        let counts: Vec<usize> = cuts.iter().map(Vec::len).collect();
        let region = |k: usize, alpha: usize| Region::piece(piece_of(&sub[k], &cuts[k], alpha));
        let mut total = WickExpression::zero();
        for tuple in all_tuples(&counts) {
            let top = table
                .get(&tuple)
                .ok_or_else(|| Error::InvalidChopping(format!("no latest member for tuple {tuple:?}")))?;
            if top >= verts.len() {
                return Err(Error::InvalidChopping(format!("latest index {top} out of range")));
            }
            let rest: Vec<usize> = verts.iter().enumerate().filter(|&(k, _)| k != top).map(|(_, &v)| v).collect();
            let label = |s: FieldSymbol| {
                let k = verts.iter().position(|&v| v + 1 == s.vertex).expect("vertex of this configuration");
                FieldSymbol::on_piece(s.vertex, tuple[k])
            };
            let below = self.whole(&rest)?.map_symbols(label);
            let phi = FieldSymbol::on_piece(verts[top] + 1, tuple[top]);
            let expanded = below.left_multiply(phi);
            // ⟨φ^α(top) φ^β(j)⟩ is time-ordered once piece α is later than piece β
            let latest = region(top, tuple[top]);
            let mut rewritten = WickExpression::zero();
            for (m, c) in expanded.terms() {
                let mut props = Vec::with_capacity(m.props.len());
                for p in &m.props {
                    if p.kind == PropKind::TwoPoint && p.left == phi {
                        let k = verts.iter().position(|&v| v + 1 == p.right.vertex).expect("vertex");
                        if !later_region(&latest, &region(k, tuple[k])) {
                            return Err(Error::InternalVerificationFailure(format!(
                                "piece {} of string {} is not later than piece {} of string {}",
                                tuple[top], verts[top], tuple[k], verts[k]
                            )));
                        }
                        props.push(Propagator::feynman(p.left, p.right));
                    } else {
                        props.push(*p);
                    }
                }
                rewritten.add_term(c.clone(), Monomial::new(props, m.normal.clone()));
            }
            total.add(&rewritten);
        }
        let mut e = total;
        for (k, &v) in verts.iter().enumerate() {
            e = resum_vertex(&e, v + 1, counts[k]);
        }
        Ok(e)
    }
}

/// Drops the piece label of `vertex` wherever all `pieces` labels occur with
/// equal coefficients in otherwise identical terms.
pub fn resum_vertex(e: &WickExpression, vertex: usize, pieces: usize) -> WickExpression {
    let erase = |s: FieldSymbol| if s.vertex == vertex { FieldSymbol::whole(vertex) } else { s };
    let mut groups: BTreeMap<Monomial, Vec<(Option<usize>, Monomial, Rational)>> = BTreeMap::new();
    for (m, c) in e.terms() {
        let label = m.symbols().find(|s| s.vertex == vertex).and_then(|s| s.piece);
        groups.entry(m.map_symbols(erase)).or_default().push((label, m.clone(), c.clone()));
    }
    let mut out = WickExpression::zero();
    for (erased, members) in groups {
        let mut labels: Vec<Option<usize>> = members.iter().map(|(l, _, _)| *l).collect();
        labels.sort();
        let complete = labels == (0..pieces).map(Some).collect::<Vec<_>>();
        let uniform = members.windows(2).all(|w| w[0].2 == w[1].2);
        if complete && uniform && !members[0].2.is_zero() {
            out.add_term(members[0].2.clone(), erased);
        } else {
            for (_, m, c) in members {
                out.add_term(c, m);
            }
        }
    }
    out
}
