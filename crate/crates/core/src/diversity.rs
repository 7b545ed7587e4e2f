//! Species census, largest-species tracking and pairwise Hamming-distance
//! histograms.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ga::{Population, StepTrace};
use crate::genotype::Genotype;

/// Counts of identical individuals.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesCensus {
    classes: HashMap<Genotype, usize>,
    largest_size: usize,
}

impl SpeciesCensus {
    pub fn classes(&self) -> &HashMap<Genotype, usize> {
        &self.classes
    }

    pub fn count(&self, g: &Genotype) -> usize {
        self.classes.get(g).copied().unwrap_or(0)
    }

    pub fn largest_size(&self) -> usize {
        self.largest_size
    }

    pub fn species_count(&self) -> usize {
        self.classes.len()
    }

    /// A member of a largest class. Ties go to the lexicographically smallest genotype.
    pub fn largest_species(&self) -> &Genotype {
        self.classes
            .iter()
            .filter(|(_, &c)| c == self.largest_size)
            .map(|(g, _)| g)
            .min()
            .expect("non-empty census")
    }
}

pub fn census(pop: &Population) -> SpeciesCensus {
    let mut classes = HashMap::with_capacity(pop.mu());
    for g in pop.members() {
        *classes.entry(g.clone()).or_insert(0) += 1;
    }
    let largest_size = classes.values().copied().max().unwrap_or(0);
    SpeciesCensus {
        classes,
        largest_size,
    }
}

/// Incrementally maintained species counts.
///
/// Keeps, next to the per-genotype counts, how many species have each size,
/// so the largest size updates in O(1) per step.
#[derive(Debug, Clone)]
pub struct SpeciesTracker {
    counts: HashMap<Genotype, usize>,
    sizes: Vec<usize>,
    largest: usize,
    mu: usize,
}

impl SpeciesTracker {
    pub fn new(pop: &Population) -> Self {
        let mut tracker = Self {
            counts: HashMap::with_capacity(pop.mu()),
            sizes: vec![0; pop.mu() + 2],
            largest: 0,
            mu: pop.mu(),
        };
        for g in pop.members() {
            tracker.add(g);
        }
        tracker
    }

    pub fn count(&self, g: &Genotype) -> usize {
        self.counts.get(g).copied().unwrap_or(0)
    }

    pub fn largest(&self) -> usize {
        self.largest
    }

    pub fn species_count(&self) -> usize {
        self.counts.len()
    }

    fn add(&mut self, g: &Genotype) {
        let c = self.counts.entry(g.clone()).or_insert(0);
        if *c > 0 {
            self.sizes[*c] -= 1;
        }
        *c += 1;
        self.sizes[*c] += 1;
        self.largest = self.largest.max(*c);
    }

    fn remove(&mut self, g: &Genotype) -> bool {
        let Some(c) = self.counts.get_mut(g) else {
            return false;
        };
        self.sizes[*c] -= 1;
        if *c == self.largest && self.sizes[*c] == 0 {
            self.largest -= 1;
        }
        *c -= 1;
        if *c == 0 {
            self.counts.remove(g);
        } else {
            self.sizes[*c] += 1;
        }
        true
    }

    /// Applies one step given the population *before* it.
    pub fn apply(&mut self, before: &Population, trace: &StepTrace) {
        if trace.removed_index != before.mu() {
            self.add(&trace.offspring);
            let removed = self.remove(&before.members()[trace.removed_index]);
            debug_assert!(removed);
        }
        debug_assert!(self.largest >= 1 && self.largest <= self.mu);
    }
}

/// Largest species size after each step, reconstructed from the traces
/// without recomputing a census. Entry 0 is the size in `initial`; entry
/// `i` the size after the `i`-th trace.
pub fn largest_species_series(traces: &[StepTrace], initial: &Population) -> Result<Vec<usize>> {
    let mu = initial.mu();
    let mut slots = initial.members().to_vec();
    let mut fitness = initial.fitness().to_vec();
    let mut tracker = SpeciesTracker::new(initial);
    let mut series = Vec::with_capacity(traces.len() + 1);
    series.push(tracker.largest());
    let start = initial.generation();

    for (step, tr) in traces.iter().enumerate() {
        let fail = |reason: String| Error::Integrity { step, reason };
        if tr.t != start + step as u64 {
            return Err(fail(format!(
                "expected t = {}, found {}",
                start + step as u64,
                tr.t
            )));
        }
        if tr.offspring.len() != initial.n() {
            return Err(fail(format!(
                "offspring length {} differs from n = {}",
                tr.offspring.len(),
                initial.n()
            )));
        }
        if tr.removed_index > mu {
            return Err(fail(format!(
                "removed index {} out of range 0..={mu}",
                tr.removed_index
            )));
        }
        let parents_ok = match tr.parents {
            crate::ga::Parents::Single(i) => i < mu,
            crate::ga::Parents::Pair(i, j) => i < mu && j < mu,
        };
        if !parents_ok {
            return Err(fail("parent index out of range".into()));
        }
        if tr.removed_index < mu {
            if fitness[tr.removed_index] > tr.offspring_fitness {
                return Err(fail("removed member is fitter than the offspring".into()));
            }
            tracker.add(&tr.offspring);
            tracker.remove(&slots[tr.removed_index]);
            slots[tr.removed_index] = tr.offspring.clone();
            fitness[tr.removed_index] = tr.offspring_fitness;
        } else if fitness.iter().any(|&f| f < tr.offspring_fitness) {
            return Err(fail(
                "offspring removed although a worse member existed".into(),
            ));
        }
        series.push(tracker.largest());
    }
    Ok(series)
}

/// Counts of unordered pairs by Hamming distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HammingHistogram {
    counts: Vec<u64>,
    total_pairs: u64,
}

impl HammingHistogram {
    /// Count at distance `d`; zero beyond `n`.
    pub fn count(&self, d: usize) -> u64 {
        self.counts.get(d).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total_pairs(&self) -> u64 {
        self.total_pairs
    }

    pub fn relative(&self, d: usize) -> f64 {
        self.count(d) as f64 / self.total_pairs as f64
    }

    /// Relative frequencies at `0, 2, ..., 2k`.
    pub fn even_relative(&self, k: usize) -> Vec<f64> {
        (0..=k).map(|j| self.relative(2 * j)).collect()
    }

    pub fn has_odd_distance(&self) -> bool {
        self.counts.iter().skip(1).step_by(2).any(|&c| c > 0)
    }

    pub fn max_distance(&self) -> Option<usize> {
        self.counts.iter().rposition(|&c| c > 0)
    }

    pub fn mean_distance(&self) -> f64 {
        let s: u64 = self
            .counts
            .iter()
            .enumerate()
            .map(|(d, &c)| d as u64 * c)
            .sum();
        s as f64 / self.total_pairs as f64
    }
}

/// Exact histogram over all μ(μ−1)/2 unordered pairs.
pub fn hamming_histogram(pop: &Population) -> HammingHistogram {
    let members = pop.members();
    let mut counts = vec![0u64; pop.n() + 1];
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            counts[a.hamming_unchecked(b)] += 1;
        }
    }
    let mu = members.len() as u64;
    HammingHistogram {
        counts,
        total_pairs: mu * (mu - 1) / 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga::{StepEngine, StopCondition};
    use crate::params::GaParams;
    use crate::rng::make_rng;
    use proptest::prelude::*;

    fn g(s: &str) -> Genotype {
        s.parse().unwrap()
    }

    #[test]
    fn census_examples() {
        let params = GaParams::new(12, 3, 6, 0.5, 1.0, 0).unwrap();
        let mono = Population::init_monomorphic_plateau(&params, &mut make_rng(0, 0));
        let c = census(&mono);
        assert_eq!((c.species_count(), c.largest_size()), (1, 6));

        let pop = Population::from_members(vec![g("1100"), g("1100"), g("1010")], 2).unwrap();
        let c = census(&pop);
        assert_eq!(c.count(&g("1100")), 2);
        assert_eq!(c.count(&g("1010")), 1);
        assert_eq!(c.largest_size(), 2);
        assert_eq!(c.largest_species(), &g("1100"));
        assert_eq!(c.classes().values().sum::<usize>(), 3);
    }

    #[test]
    fn histogram_examples() {
        let params = GaParams::new(12, 3, 6, 0.5, 1.0, 0).unwrap();
        let mono = Population::init_monomorphic_plateau(&params, &mut make_rng(0, 0));
        let h = hamming_histogram(&mono);
        assert_eq!(h.count(0), 15);
        assert_eq!(h.total_pairs(), 15);
        assert_eq!(h.relative(0), 1.0);

        let pair = Population::from_members(vec![g("11110000"), g("11001100")], 2).unwrap();
        let h = hamming_histogram(&pair);
        assert_eq!(h.total_pairs(), 1);
        assert_eq!(h.count(4), 1);
        assert_eq!(h.counts().iter().sum::<u64>(), 1);
    }

    #[test]
    fn random_population_mean_distance_is_half_n() {
        // Each pairwise distance is Bin(30, 1/2), and for i.i.d. uniform strings
        // distinct pairs are uncorrelated: Var(mean) = (n/4) / C(μ, 2) per seed.
        let params = GaParams::new(30, 3, 10, 0.5, 1.0, 0).unwrap();
        let seeds = 100;
        let mut total = 0.0;
        for s in 0..seeds {
            let pop = Population::init_uniform(&params, &mut make_rng(s, 0));
            total += hamming_histogram(&pop).mean_distance();
        }
        let mean = total / seeds as f64;
        let var_per_seed = 30.0 * 0.25 * 2.0 / (10.0 * 9.0);
        let sigma = (var_per_seed / seeds as f64).sqrt();
        assert!((mean - 15.0).abs() <= 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn incremental_series_matches_full_census() {
        let params = GaParams::new(30, 3, 10, 0.6, 1.0, 0).unwrap();
        for seed in 0..5 {
            let mut rng = make_rng(seed, 0);
            let initial = Population::init_monomorphic_plateau(&params, &mut rng);
            let engine = StepEngine::new(&params).unwrap();
            let mut pop = initial.clone();
            let mut traces = Vec::new();
            let mut oracle = vec![census(&pop).largest_size()];
            for _ in 0..1000 {
                traces.push(engine.step(&mut pop, &mut rng));
                oracle.push(census(&pop).largest_size());
            }
            let series = largest_species_series(&traces, &initial).unwrap();
            assert_eq!(series, oracle);
            assert!(series.iter().all(|&y| (1..=10).contains(&y)));
            assert!(series.windows(2).all(|w| w[0].abs_diff(w[1]) <= 1));
        }
    }

    #[test]
    fn rejected_offspring_gives_constant_series() {
        let params = GaParams::new(8, 2, 4, 0.0, 8.0, 0).unwrap();
        let mut rng = make_rng(0, 0);
        let initial = Population::init_monomorphic_plateau(&params, &mut rng);
        let engine = StepEngine::new(&params).unwrap();
        let mut pop = initial.clone();
        let traces: Vec<_> = (0..25).map(|_| engine.step(&mut pop, &mut rng)).collect();
        assert_eq!(
            largest_species_series(&traces, &initial).unwrap(),
            vec![4; 26]
        );
    }

    #[test]
    fn inconsistent_traces_are_rejected() {
        let params = GaParams::new(20, 2, 5, 0.5, 1.0, 0).unwrap();
        let mut rng = make_rng(1, 0);
        let initial = Population::init_uniform(&params, &mut rng);
        let engine = StepEngine::new(&params).unwrap();
        let mut pop = initial.clone();
        let traces: Vec<_> = (0..10).map(|_| engine.step(&mut pop, &mut rng)).collect();

        let mut skipped = traces.clone();
        skipped.remove(3);
        assert!(matches!(
            largest_species_series(&skipped, &initial),
            Err(Error::Integrity { step: 3, .. })
        ));

        let mut bad = traces.clone();
        bad[2].removed_index = 6;
        assert!(matches!(
            largest_species_series(&bad, &initial),
            Err(Error::Integrity { step: 2, .. })
        ));

        let mut short = traces;
        short[0].offspring = Genotype::zeros(19);
        assert!(largest_species_series(&short, &initial).is_err());
    }

    #[test]
    fn plateau_runs_have_even_distances_only() {
        let params = GaParams::new(40, 4, 12, 0.8, 1.0, 0).unwrap();
        let mut rng = make_rng(3, 0);
        let pop = Population::init_monomorphic_plateau(&params, &mut rng);
        struct Check;
        impl crate::ga::Telemetry for Check {
            fn snapshot(&mut self, pop: &Population) -> std::ops::ControlFlow<()> {
                if pop.all_on_plateau() {
                    let h = hamming_histogram(pop);
                    assert!(!h.has_odd_distance());
                    assert!(h.max_distance().unwrap() <= 2 * pop.k());
                    assert_eq!(h.counts().iter().sum::<u64>(), h.total_pairs());
                    let c = census(pop);
                    if c.species_count() > 1 {
                        assert!(h.counts()[2..].iter().any(|&x| x > 0));
                    }
                }
                std::ops::ControlFlow::Continue(())
            }
        }
        crate::ga::run(
            pop,
            &params,
            &[
                StopCondition::MaxIterations(5000),
                StopCondition::OptimumFound,
            ],
            &mut rng,
            &mut Check,
        )
        .unwrap();
    }

    proptest! {
        #[test]
        fn census_and_histogram_ignore_member_order(seed in any::<u64>(), rot in 0usize..8) {
            let params = GaParams::new(16, 3, 8, 0.5, 1.0, 0).unwrap();
            let mut rng = make_rng(seed, 0);
            // Small alphabet so species repeat.
            let pool: Vec<Genotype> = (0..3).map(|_| Genotype::random(16, &mut rng)).collect();
            let members: Vec<Genotype> = (0..params.mu).map(|i| pool[(seed as usize >> i) % 3].clone()).collect();
            let mut rotated = members.clone();
            rotated.rotate_left(rot);
            let a = Population::from_members(members, 3).unwrap();
            let b = Population::from_members(rotated, 3).unwrap();
            prop_assert_eq!(census(&a), census(&b));
            prop_assert_eq!(hamming_histogram(&a), hamming_histogram(&b));
            prop_assert_eq!(census(&a).classes().values().sum::<usize>(), 8);
        }
    }
}
