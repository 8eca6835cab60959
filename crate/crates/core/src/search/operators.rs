use rand::seq::SliceRandom;
use rand::Rng;

use crate::planning::Chromosome;

use super::GaParams;

/// Guards the selection weight 1/(F + ε) against zero fitness.
pub const WEIGHT_EPSILON: f64 = 1e-12;

/// `size` uniform random permutations of `1..=m+n-1`.
pub fn init_population<R: Rng + ?Sized>(m: usize, n: usize, size: usize, rng: &mut R) -> Vec<Chromosome> {
    (0..size)
        .map(|_| {
            let mut genes: Vec<usize> = (1..m + n).collect();
            genes.shuffle(rng);
            Chromosome::new(genes)
        })
        .collect()
}

/// Selection weight of a cost-valued fitness; lower cost, higher weight.
pub fn selection_weight(fitness: f64) -> f64 {
    1.0 / (fitness + WEIGHT_EPSILON)
}

/// Roulette wheel over `weights`: index `i` is drawn when
/// `Q[i-1] < r <= Q[i]` for cumulative weights `Q`. All-zero weights fall back
/// to a uniform draw.
pub fn roulette<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return rng.gen_range(0..weights.len());
    }
    let r = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if r < acc {
            return i;
        }
    }
    // round-off at the top end
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(weights.len() - 1)
}

/// Mating pool: the lowest-fitness chromosome first, then `len - 1` roulette
/// picks.
pub fn selection<R: Rng + ?Sized>(population: &[Chromosome], fitnesses: &[f64], rng: &mut R) -> Vec<Chromosome> {
    assert_eq!(population.len(), fitnesses.len());
    selection_indices(fitnesses, rng)
        .into_iter()
        .map(|i| population[i].clone())
        .collect()
}

/// Population indices of the mating pool built by [`selection`].
pub fn selection_indices<R: Rng + ?Sized>(fitnesses: &[f64], rng: &mut R) -> Vec<usize> {
    let weights: Vec<f64> = fitnesses.iter().map(|&f| selection_weight(f)).collect();
    let mut pool = Vec::with_capacity(fitnesses.len());
    pool.push(argmin(fitnesses));
    for _ in 1..fitnesses.len() {
        pool.push(roulette(&weights, rng));
    }
    pool
}

pub(crate) fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

/// Crossover probability for a pair whose better parent has weight `w_best`.
pub fn adaptive_pc(w_best: f64, w_avg: f64, w_max: f64, params: &GaParams) -> f64 {
    let span = w_max - w_avg;
    if !(span > 0.0) || w_best < w_avg {
        return params.pc_hi;
    }
    let p = params.pc_hi - (params.pc_hi - params.pc_lo) * (w_best - w_avg) / span;
    p.clamp(params.pc_lo, params.pc_hi)
}

/// Mutation probability for an individual of weight `w`.
pub fn adaptive_pm(w: f64, w_avg: f64, w_max: f64, params: &GaParams) -> f64 {
    let span = w_max - w_avg;
    if !(span > 0.0) || w < w_avg {
        return params.pm_hi;
    }
    let p = params.pm_hi - (params.pm_hi - params.pm_lo) * (w_max - w) / span;
    p.clamp(params.pm_lo, params.pm_hi)
}

/// Two distinct cut points `0 <= c1 < c2 <= len`.
pub fn random_cuts<R: Rng + ?Sized>(len: usize, rng: &mut R) -> (usize, usize) {
    let picks = rand::seq::index::sample(rng, len + 1, 2);
    let (a, b) = (picks.index(0), picks.index(1));
    (a.min(b), a.max(b))
}

/// Partially mapped crossover: the genes in `[cut1, cut2)` are exchanged and
/// duplicates outside the segment are resolved through the segment mapping.
pub fn pmx_crossover(a: &Chromosome, b: &Chromosome, cut1: usize, cut2: usize) -> (Chromosome, Chromosome) {
    assert_eq!(a.len(), b.len());
    assert!(cut1 < cut2 && cut2 <= a.len(), "invalid cut points ({cut1}, {cut2})");
    (pmx_child(&a.genes, &b.genes, cut1, cut2), pmx_child(&b.genes, &a.genes, cut1, cut2))
}

// child keeps `outer` outside the segment and takes `inner`'s segment
fn pmx_child(outer: &[usize], inner: &[usize], cut1: usize, cut2: usize) -> Chromosome {
    let len = outer.len();
    // position of each gene within inner's segment
    let mut seg_pos = vec![usize::MAX; len + 1];
    for i in cut1..cut2 {
        seg_pos[inner[i]] = i;
    }
    let mut child = outer.to_vec();
    child[cut1..cut2].copy_from_slice(&inner[cut1..cut2]);
    for i in (0..cut1).chain(cut2..len) {
        let mut g = outer[i];
        while seg_pos[g] != usize::MAX {
            g = outer[seg_pos[g]];
        }
        child[i] = g;
    }
    Chromosome::new(child)
}

/// Exchanges the genes at two distinct random sites.
pub fn swap_mutation<R: Rng + ?Sized>(c: &Chromosome, rng: &mut R) -> Chromosome {
    assert!(c.len() >= 2, "swap mutation needs at least two genes");
    let picks = rand::seq::index::sample(rng, c.len(), 2);
    swap_genes(c, picks.index(0), picks.index(1))
}

pub fn swap_genes(c: &Chromosome, i: usize, j: usize) -> Chromosome {
    assert_ne!(i, j, "swap sites must differ");
    let mut genes = c.genes.clone();
    genes.swap(i, j);
    Chromosome::new(genes)
}
