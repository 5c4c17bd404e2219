//! Elimination of negated cardinality atoms.
//!
//! `-(k X m)` holds iff fewer than `k` or more than `m` atoms of `X` are
//! true, so inside its clause it can be replaced by the two positive
//! cardinality atoms `X(k-1)` and `(m+1)X`. A disjunct whose bound is vacuous
//! is dropped: the first when the effective lower bound is 0, the second
//! when the effective upper bound reaches `|X|`.

use super::{CAtom, Clause, Literal, Theory};

impl Theory {
    /// Returns an equivalent theory over the same atoms without negated
    /// cardinality atoms. Idempotent; theories without negated cardinality
    /// atoms are returned unchanged (up to clone).
    pub fn normalize(&self) -> Theory {
        let clauses = self
            .clauses()
            .iter()
            .map(|clause| {
                let mut literals = Vec::with_capacity(clause.len());
                for lit in clause.literals() {
                    match lit {
                        Literal::NegCard(c) => literals.extend(negate_catom(c)),
                        other => literals.push(other.clone()),
                    }
                }
                Clause::new(literals).expect("rewrite keeps clauses non-empty")
            })
            .collect();
        let t = Theory::new(self.num_atoms(), clauses).expect("atoms unchanged");
        match self.atom_names() {
            Some(names) => t.with_names(names.to_vec()),
            None => t,
        }
    }
}

fn negate_catom(c: &CAtom) -> Vec<Literal> {
    let n = c.size();
    let lo = c.effective_lower();
    let hi = c.effective_upper();
    let mut out = Vec::new();
    if lo > 0 {
        // fewer than k true
        out.push(Literal::Card(
            CAtom::new(None, Some(lo - 1), c.atoms().to_vec()).unwrap(),
        ));
    }
    if hi < n {
        // more than m true
        out.push(Literal::Card(
            CAtom::new(Some(hi + 1), None, c.atoms().to_vec()).unwrap(),
        ));
    }
    if out.is_empty() {
        // The inner atom is trivially true, so its negation is trivially
        // false. Keep a trivially false placeholder so the clause stays
        // non-empty and models are preserved.
        out.push(Literal::Card(
            CAtom::new(Some(n + 1), None, c.atoms().to_vec()).unwrap(),
        ));
    }
    out
}
