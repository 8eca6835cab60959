use serde::{Deserialize, Serialize};

/// Permutation of `1..=m+n-1`. Genes `1..=m` are target ids; the `n-1` genes
/// above `m` split the string into one fragment per servicer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chromosome {
    pub genes: Vec<usize>,
}

impl Chromosome {
    pub fn new(genes: Vec<usize>) -> Self {
        Self { genes }
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    /// True when the genes are exactly a permutation of `1..=len`.
    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.genes.len()];
        self.genes.iter().all(|&g| {
            g >= 1 && g <= seen.len() && !std::mem::replace(&mut seen[g - 1], true)
        })
    }

    pub fn is_valid_for(&self, m: usize, n: usize) -> bool {
        self.genes.len() == m + n - 1 && self.is_permutation()
    }

    /// Splits the gene string into `n` target sequences, one per servicer in
    /// order. Fragments may be empty.
    pub fn decode(&self, m: usize, n: usize) -> Vec<Vec<usize>> {
        debug_assert!(self.is_valid_for(m, n));
        let mut routes = vec![Vec::new(); n];
        let mut current = 0;
        for &g in &self.genes {
            if g > m {
                current += 1;
            } else {
                routes[current].push(g);
            }
        }
        routes
    }

    /// One preimage of `sequences` under [`decode`](Self::decode): routes
    /// joined by split genes `m+1, m+2, …`.
    pub fn encode(sequences: &[Vec<usize>], m: usize) -> Self {
        let mut genes = Vec::with_capacity(m + sequences.len().saturating_sub(1));
        for (i, seq) in sequences.iter().enumerate() {
            if i > 0 {
                genes.push(m + i);
            }
            genes.extend_from_slice(seq);
        }
        Self { genes }
    }
}
