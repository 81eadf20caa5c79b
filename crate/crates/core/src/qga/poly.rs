use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A polynomial over F2 in `num_vars` variables, stored as a set of
/// monomials. Monomial bit `i` set means variable `x_{i+1}` (qubit `i`)
/// appears; the empty mask is the constant monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePolyF2 {
    num_vars: usize,
    degree_bound: usize,
    term_bound: usize,
    terms: Vec<u64>,
}

impl SparsePolyF2 {
    /// Terms are kept in ascending order; duplicates are rejected.
    pub fn new(num_vars: usize, degree_bound: usize, term_bound: usize, mut terms: Vec<u64>) -> Result<Self> {
        if num_vars == 0 || num_vars > 63 {
            return Err(invalid(format!("num_vars {num_vars} out of range")));
        }
        if degree_bound == 0 || degree_bound > num_vars {
            return Err(invalid(format!("degree bound {degree_bound} must lie in [1, {num_vars}]")));
        }
        if term_bound == 0 {
            return Err(invalid("term bound must be at least 1"));
        }
        terms.sort_unstable();
        if terms.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("duplicate monomial"));
        }
        if terms.len() > term_bound {
            return Err(invalid(format!("{} terms exceeds bound {term_bound}", terms.len())));
        }
        for &m in &terms {
            if m >> num_vars != 0 {
                return Err(invalid(format!("monomial {m:#x} uses variables beyond {num_vars}")));
            }
            if m.count_ones() as usize > degree_bound {
                return Err(invalid(format!("monomial {m:#x} exceeds degree {degree_bound}")));
            }
        }
        Ok(SparsePolyF2 { num_vars, degree_bound, term_bound, terms })
    }

    /// The zero polynomial.
    pub fn zero(num_vars: usize, degree_bound: usize, term_bound: usize) -> Result<Self> {
        Self::new(num_vars, degree_bound, term_bound, Vec::new())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }
    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }
    pub fn term_bound(&self) -> usize {
        self.term_bound
    }
    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|m| m.count_ones() as usize).max().unwrap_or(0)
    }

    pub fn has_constant_term(&self) -> bool {
        self.terms.first() == Some(&0)
    }

    /// f(x) for an assignment given as a bitmask.
    pub fn eval(&self, x: u64) -> bool {
        self.terms.iter().filter(|&&m| m & x == m).count() % 2 == 1
    }

    /// The full truth table, by the binary Möbius transform of the
    /// coefficient vector.
    pub fn truth_table(&self) -> Vec<bool> {
        let mut table = vec![false; 1usize << self.num_vars];
        for &m in &self.terms {
            table[m as usize] = true;
        }
        let mut step = 1;
        while step < table.len() {
            for block in table.chunks_mut(step * 2) {
                let (lo, hi) = block.split_at_mut(step);
                for (l, h) in lo.iter().zip(hi.iter_mut()) {
                    *h ^= *l;
                }
            }
            step *= 2;
        }
        table
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct PolyBody {
    pub degree_bound: usize,
    pub term_bound: usize,
    pub terms: Vec<String>,
}

impl SparsePolyF2 {
    pub(crate) fn to_body(&self) -> PolyBody {
        PolyBody {
            degree_bound: self.degree_bound,
            term_bound: self.term_bound,
            terms: self.terms.iter().map(|m| format!("{m:x}")).collect(),
        }
    }

    pub(crate) fn from_body(num_vars: usize, body: PolyBody) -> Result<Self> {
        let terms = body
            .terms
            .iter()
            .map(|s| {
                let digits = s.strip_prefix("0x").unwrap_or(s);
                u64::from_str_radix(digits, 16)
                    .map_err(|e| Error::Serialization(format!("bad monomial {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        SparsePolyF2::new(num_vars, body.degree_bound, body.term_bound, terms)
    }
}
