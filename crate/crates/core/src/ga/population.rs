use rand::Rng;

use crate::error::{invalid, Result};
use crate::fitness::{jump_value, optimum_fitness, plateau_fitness, Fitness};
use crate::genotype::Genotype;
use crate::params::GaParams;

/// A multiset of exactly μ individuals with cached Jump_k fitness.
///
/// Member order carries no meaning for the algorithm (selection is uniform)
/// but it is stable, so trace indices can refer to positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    members: Vec<Genotype>,
    fitness: Vec<Fitness>,
    n: usize,
    k: usize,
    generation: u64,
}

impl Population {
    /// μ independent uniform samples from `{0,1}^n`.
    pub fn init_uniform<R: Rng + ?Sized>(params: &GaParams, rng: &mut R) -> Self {
        let members = (0..params.mu)
            .map(|_| Genotype::random(params.n, rng))
            .collect();
        Self::assemble(members, params.k)
    }

    /// μ copies of one plateau point drawn uniformly among all strings with
    /// exactly k zeros.
    pub fn init_monomorphic_plateau<R: Rng + ?Sized>(params: &GaParams, rng: &mut R) -> Self {
        let x = Genotype::random_with_zeros(params.n, params.k, rng).expect("k <= n");
        Self::assemble(vec![x; params.mu], params.k)
    }

    /// Builds a population from explicit members. All members must share a
    /// length `n >= k` and there must be at least two of them.
    pub fn from_members(members: Vec<Genotype>, k: usize) -> Result<Self> {
        if members.len() < 2 {
            return Err(invalid("mu", members.len(), "at least 2 members"));
        }
        let n = members[0].len();
        for m in &members[1..] {
            members[0].check_same_len(m)?;
        }
        if k == 0 || k > n {
            return Err(invalid("k", k, "1 <= k <= n"));
        }
        Ok(Self::assemble(members, k))
    }

    fn assemble(members: Vec<Genotype>, k: usize) -> Self {
        let n = members[0].len();
        let fitness = members
            .iter()
            .map(|g| jump_value(g.ones_count(), n, k))
            .collect();
        Self {
            members,
            fitness,
            n,
            k,
            generation: 0,
        }
    }

    pub fn mu(&self) -> usize {
        self.members.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of completed iterations.
    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn members(&self) -> &[Genotype] {
        &self.members
    }

    pub fn fitness(&self) -> &[Fitness] {
        &self.fitness
    }

    pub fn get(&self, i: usize) -> (&Genotype, Fitness) {
        (&self.members[i], self.fitness[i])
    }

    pub fn max_fitness(&self) -> Fitness {
        *self.fitness.iter().max().expect("non-empty population")
    }

    pub fn min_fitness(&self) -> Fitness {
        *self.fitness.iter().min().expect("non-empty population")
    }

    pub fn contains_optimum(&self) -> bool {
        let opt = optimum_fitness(self.n, self.k);
        self.fitness.contains(&opt)
    }

    /// Every member is on the plateau or is the optimum.
    pub fn all_at_least_plateau(&self) -> bool {
        self.min_fitness() >= plateau_fitness(self.n)
    }

    /// Every member has exactly `n - k` ones.
    pub fn all_on_plateau(&self) -> bool {
        let plateau = plateau_fitness(self.n);
        self.fitness.iter().all(|&f| f == plateau)
    }

    /// Replaces the member at `index` with `offspring`; advances the generation.
    pub(crate) fn replace(&mut self, index: usize, offspring: Genotype, fitness: Fitness) {
        self.members[index] = offspring;
        self.fitness[index] = fitness;
    }

    pub(crate) fn advance(&mut self) {
        self.generation += 1;
    }

    /// Cached fitness agrees with a fresh evaluation for every member.
    pub fn check_fitness_cache(&self) -> bool {
        self.members
            .iter()
            .zip(&self.fitness)
            .all(|(g, &f)| jump_value(g.ones_count(), self.n, self.k) == f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diversity::census;
    use crate::rng::make_rng;

    #[test]
    fn smallest_uniform_population() {
        let params = GaParams::new(2, 1, 2, 0.5, 1.0, 0).unwrap();
        let pop = Population::init_uniform(&params, &mut make_rng(0, 0));
        assert_eq!(pop.mu(), 2);
        assert!(pop.members().iter().all(|g| g.len() == 2));
        assert!(pop.check_fitness_cache());
        assert_eq!(pop.generation(), 0);
    }

    #[test]
    fn uniform_init_is_deterministic() {
        let params = GaParams::new(100, 3, 50, 0.5, 1.0, 9).unwrap();
        let a = Population::init_uniform(&params, &mut make_rng(9, 0));
        let b = Population::init_uniform(&params, &mut make_rng(9, 0));
        assert_eq!(a, b);
    }

    #[test]
    fn uniform_init_mean_ones_is_half() {
        // Per seed the member mean of ones is Bin(mu*n, 1/2)/mu.
        let params = GaParams::new(100, 3, 50, 0.5, 1.0, 0).unwrap();
        let seeds = 100;
        let mut total = 0usize;
        for s in 0..seeds {
            let pop = Population::init_uniform(&params, &mut make_rng(s, 0));
            total += pop
                .members()
                .iter()
                .map(Genotype::ones_count)
                .sum::<usize>();
        }
        let draws = (seeds as usize * 50) as f64;
        let mean = total as f64 / draws;
        let sigma = (100.0f64 * 0.25 / draws).sqrt();
        assert!((mean - 50.0).abs() <= 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn monomorphic_plateau_is_one_species_on_plateau() {
        let params = GaParams::new(30, 4, 7, 0.5, 1.0, 0).unwrap();
        let pop = Population::init_monomorphic_plateau(&params, &mut make_rng(1, 0));
        let c = census(&pop);
        assert_eq!(c.species_count(), 1);
        assert_eq!(c.largest_size(), 7);
        assert!(pop.fitness().iter().all(|&f| f == Fitness(30)));
        assert!(pop.all_on_plateau());
    }

    #[test]
    fn monomorphic_plateau_pattern_is_uniform() {
        // 15 zero-position patterns for n=6, k=2; each should appear with frequency 1/15.
        let params = GaParams::new(6, 2, 2, 0.5, 1.0, 0).unwrap();
        let trials = 10_000u64;
        let mut counts = std::collections::HashMap::new();
        for s in 0..trials {
            let pop = Population::init_monomorphic_plateau(&params, &mut make_rng(s, 3));
            *counts.entry(pop.members()[0].to_string()).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 15);
        let p = 1.0 / 15.0;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        for (pattern, c) in counts {
            let freq = c as f64 / trials as f64;
            assert!((freq - p).abs() <= 3.0 * se, "{pattern}: {freq}");
        }
    }

    #[test]
    fn from_members_validation() {
        let x: Genotype = "1100".parse().unwrap();
        assert!(Population::from_members(vec![x.clone()], 1).is_err());
        assert!(Population::from_members(vec![x.clone(), "110".parse().unwrap()], 1).is_err());
        assert!(Population::from_members(vec![x.clone(), x.clone()], 5).is_err());
        let p = Population::from_members(vec![x.clone(), Genotype::ones(4)], 2).unwrap();
        assert!(p.contains_optimum());
        assert_eq!(p.max_fitness(), Fitness(6));
    }
}
