//! Contraction graphs and Wick expansion of ordered products.

use serde::{Deserialize, Serialize};

use crate::wick::expression::{FieldSymbol, WickExpression};

/// A partial matching of the vertices `1..=n`: internal lines `(s, r)` with
/// `s < r`, every other vertex an external line.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContractionGraph {
    pub internal: Vec<(usize, usize)>,
    pub external: Vec<usize>,
}

impl ContractionGraph {
    /// Each vertex lies on exactly one line.
    pub fn is_valid(&self, n: usize) -> bool {
        let mut seen = vec![false; n + 1];
        let mut mark = |v: usize| v >= 1 && v <= n && !std::mem::replace(&mut seen[v], true);
        let ok = self.internal.iter().all(|&(s, r)| s < r && mark(s) && mark(r)) && self.external.iter().all(|&v| mark(v));
        ok && seen[1..].iter().all(|&b| b)
    }
}

pub fn enumerate_graphs(n: usize) -> Vec<ContractionGraph> {
    fn go(free: &[usize], internal: &mut Vec<(usize, usize)>, external: &mut Vec<usize>, out: &mut Vec<ContractionGraph>) {
        let Some((&v, rest)) = free.split_first() else {
            out.push(ContractionGraph { internal: internal.clone(), external: external.clone() });
            return;
        };
        external.push(v);
        go(rest, internal, external, out);
        external.pop();
        for k in 0..rest.len() {
            let mut remaining = rest.to_vec();
            let r = remaining.remove(k);
            internal.push((v, r));
            go(&remaining, internal, external, out);
            internal.pop();
        }
    }
    let vertices: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    go(&vertices, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

/// `I(n) = I(n-1) + (n-1) I(n-2)`.
pub fn involution_number(n: usize) -> u64 {
    let (mut a, mut b) = (1u64, 1u64);
    for k in 2..=n as u64 {
        let next = b + (k - 1) * a;
        a = b;
        b = next;
    }
    b
}

/// Expands the ordered operator product `φ(w_1) ... φ(w_k)` into normal-ordered
/// terms with two-point contractions `⟨φ(a) φ(b)⟩`, `a` the earlier factor.
pub fn normal_order_product(word: &[FieldSymbol]) -> WickExpression {
    word.iter().rev().fold(WickExpression::one(), |acc, &phi| acc.left_multiply(phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::wick::expression::{Monomial, Propagator};

    fn phi(v: usize) -> FieldSymbol {
        FieldSymbol::whole(v)
    }

    #[test]
    fn graph_counts() {
        for n in 0..=7 {
            let graphs = enumerate_graphs(n);
            assert_eq!(graphs.len() as u64, involution_number(n));
            assert!(graphs.iter().all(|g| g.is_valid(n)));
        }
        let counts: Vec<u64> = (0..=5).map(involution_number).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 10, 26]);
    }

    #[test]
    fn normal_order_examples() {
        assert_eq!(normal_order_product(&[phi(1)]).to_string(), ":φ(1):");
        let mut expected = WickExpression::monomial(int(1), Monomial::new(vec![], vec![phi(1), phi(2)]));
        expected.add_term(int(1), Monomial::new(vec![Propagator::two_point(phi(1), phi(2))], vec![]));
        assert_eq!(normal_order_product(&[phi(1), phi(2)]), expected);
        let swapped = normal_order_product(&[phi(2), phi(1)]);
        assert!(swapped.terms().any(|(m, _)| m.props == vec![Propagator::two_point(phi(2), phi(1))]));
        assert_eq!(normal_order_product(&[]).to_string(), "1");
    }

    #[test]
    fn commutator_is_central() {
        let w = [phi(3), phi(4), phi(5)];
        let mut a: Vec<FieldSymbol> = w.to_vec();
        a.extend([phi(1), phi(2)]);
        let mut b: Vec<FieldSymbol> = w.to_vec();
        b.extend([phi(2), phi(1)]);
        let lhs = normal_order_product(&a).sub(&normal_order_product(&b));
        let comm = WickExpression::monomial(int(1), Monomial::new(vec![Propagator::two_point(phi(1), phi(2))], vec![]))
            .sub(&WickExpression::monomial(int(1), Monomial::new(vec![Propagator::two_point(phi(2), phi(1))], vec![])));
        let rhs = comm.operator_product(&normal_order_product(&w));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ordered_product_term_count_is_involution_number() {
        let word: Vec<FieldSymbol> = (1..=5).map(phi).collect();
        assert_eq!(normal_order_product(&word).len(), 26);
    }
}
