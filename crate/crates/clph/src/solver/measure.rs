//! The termination measure: a tuple per conjunction, a multiset of tuples
//! per constraint.

use std::cmp::Ordering;

use crate::constraint::{eq_solved_vars, Conj, Dnf, Prim};
use crate::syntax::Item;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    pub n1: usize,
    /// Multisets are kept sorted in descending order.
    pub m1: Vec<usize>,
    pub n2: usize,
    pub m2: Vec<usize>,
    pub m3: Vec<usize>,
}

fn desc(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// For a total order, the multiset extension coincides with the
/// lexicographic order on descending-sorted sequences.
fn cmp_multiset<T: Ord>(a: &[T], b: &[T]) -> Ordering {
    a.cmp(b)
}

impl Ord for Measure {
    fn cmp(&self, o: &Self) -> Ordering {
        self.n1
            .cmp(&o.n1)
            .then_with(|| cmp_multiset(&self.m1, &o.m1))
            .then_with(|| self.n2.cmp(&o.n2))
            .then_with(|| cmp_multiset(&self.m2, &o.m2))
            .then_with(|| cmp_multiset(&self.m3, &o.m3))
    }
}

impl PartialOrd for Measure {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Measure {
    pub fn zero() -> Measure {
        Measure { n1: 0, m1: Vec::new(), n2: 0, m2: Vec::new(), m3: Vec::new() }
    }
}

pub fn cm(c: &Conj) -> Measure {
    let lits = match c {
        Conj::False => return Measure::zero(),
        Conj::Lits(l) => l,
    };
    let solved = eq_solved_vars(lits);
    let n1 = c.vars().iter().filter(|v| !solved.contains(v)).count();
    let mut m1 = Vec::new();
    let mut n2 = 0;
    let mut m2 = Vec::new();
    let mut m3 = Vec::new();
    for p in lits {
        match p {
            Prim::In(h, r) => {
                if !h.is_empty() {
                    m1.push(h.size());
                }
                if matches!(h.items(), [Item::HVar(_)]) {
                    n2 += 1;
                }
                m2.push(r.size());
            }
            Prim::Eq(l, r) => m3.push(l.size() + r.size()),
            Prim::FEq(..) => m3.push(2),
        }
    }
    Measure { n1, m1: desc(m1), n2, m2: desc(m2), m3: desc(m3) }
}

/// The constraint measure as a descending-sorted multiset of tuples.
pub fn cm_dnf(d: &Dnf) -> Vec<Measure> {
    let mut v: Vec<Measure> = d.0.iter().map(cm).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

pub fn measure_less(a: &[Measure], b: &[Measure]) -> bool {
    cmp_multiset(a, b) == Ordering::Less
}
