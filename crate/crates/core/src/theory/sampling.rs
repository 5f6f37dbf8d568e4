use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{JRepresentation, Theory, TheoryError};
use crate::formula::{self, Formula, GenerationParams};

/// Parameters of a seeded draw of base theories and objectives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSpec {
    /// Size of every base theory.
    pub j: usize,
    /// Number of base theories.
    pub x: usize,
    /// Number of objective candidates before the satisfiability filter.
    pub o: usize,
    pub seed: u64,
    /// Draws allowed per requested theory before giving up.
    pub attempts_per_theory: usize,
}

impl SampleSpec {
    pub fn new(j: usize, x: usize, o: usize, seed: u64) -> Self {
        SampleSpec {
            j,
            x,
            o,
            seed,
            attempts_per_theory: 1000,
        }
    }
}

/// Theories use stream 0 of the seed, objectives stream 1, so either can be
/// redrawn without disturbing the other.
pub fn theory_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    rng
}

pub fn objective_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

#[derive(Clone, Debug)]
pub struct TheorySample {
    pub params: GenerationParams,
    pub spec: SampleSpec,
    pub theories: Vec<Theory>,
    pub attempts: usize,
    pub rejected: usize,
}

impl TheorySample {
    /// Plain-text record of the draw: seed, bounds, rejection counts and
    /// one `j-rep` line per theory.
    pub fn manifest(&self) -> String {
        let mut out = format!(
            "params: {}\nseed: {}\nj: {}\nx: {}\nattempts: {}\nrejected: {}\n",
            self.params, self.spec.seed, self.spec.j, self.spec.x, self.attempts, self.rejected
        );
        for (i, t) in self.theories.iter().enumerate() {
            out.push_str(&format!("theory {}: gs={} j-rep: {}\n", i, t.separation().0, t.jrep()));
        }
        out
    }
}

impl fmt::Display for TheorySample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.manifest())
    }
}

/// Uniform `BigUint` in `0..=max`.
fn uniform_upto(rng: &mut ChaCha8Rng, max: &BigUint) -> BigUint {
    rng.gen_biguint_below(&(max + 1u32))
}

/// Uniform composition of `g` into `parts` non-negative summands.
///
/// Picks `parts - 1` bar positions among `g + parts - 1` slots with Floyd's
/// subset algorithm, then reads the gaps between bars.
fn composition(rng: &mut ChaCha8Rng, g: &BigUint, parts: usize) -> Vec<BigUint> {
    if parts == 0 {
        return Vec::new();
    }
    let slots = g + BigUint::from(parts - 1);
    let bars = parts - 1;
    let mut chosen: BTreeSet<BigUint> = BTreeSet::new();
    let start = &slots - BigUint::from(bars);
    let mut i = start;
    while i < slots {
        let t = uniform_upto(rng, &i);
        if chosen.contains(&t) {
            chosen.insert(i.clone());
        } else {
            chosen.insert(t);
        }
        i += 1u32;
    }
    let mut out = Vec::with_capacity(parts);
    let mut prev: Option<BigUint> = None;
    for b in &chosen {
        let gap = match &prev {
            None => b.clone(),
            Some(p) => b - p - 1u32,
        };
        out.push(gap);
        prev = Some(b.clone());
    }
    out.push(match prev {
        None => slots,
        Some(p) => &slots - p - 1u32,
    });
    out
}

/// One uniformly chosen theory of size `j` in separation class `g`.
pub fn sample_theory_in_class(
    params: &GenerationParams,
    j: usize,
    g: &BigUint,
    rng: &mut ChaCha8Rng,
) -> Result<Theory, TheoryError> {
    let size = formula::count(params);
    if BigUint::from(j) > size {
        return Err(TheoryError::TooLarge { j, size });
    }
    if g + BigUint::from(j) > size {
        return Err(TheoryError::InvalidSpec(format!("class g={g} has no theory of size {j}")));
    }
    let k = JRepresentation(composition(rng, g, j));
    Theory::from_jrep(*params, &k)
}

/// Draws `spec.x` satisfiable base theories of size `spec.j`.
///
/// Each draw picks `g` uniformly in `0..=f-j`, then a uniform member of
/// class `[g]`; unsatisfiable draws are rejected and redrawn.
pub fn sample_theories(params: &GenerationParams, spec: &SampleSpec) -> Result<TheorySample, TheoryError> {
    if spec.j == 0 {
        return Err(TheoryError::InvalidSpec("j must be positive".into()));
    }
    let size = formula::count(params);
    if BigUint::from(spec.j) > size {
        return Err(TheoryError::TooLarge { j: spec.j, size });
    }
    let max_g = &size - BigUint::from(spec.j);
    let budget = spec.attempts_per_theory.saturating_mul(spec.x.max(1));
    let mut rng = theory_rng(spec.seed);
    let mut theories = Vec::with_capacity(spec.x);
    let mut attempts = 0;
    let mut rejected = 0;
    while theories.len() < spec.x {
        if attempts == budget {
            return Err(TheoryError::RejectionBudget {
                attempts,
                rejected,
                accepted: theories.len(),
            });
        }
        attempts += 1;
        let g = uniform_upto(&mut rng, &max_g);
        let t = sample_theory_in_class(params, spec.j, &g, &mut rng)?;
        if t.is_satisfiable() {
            theories.push(t);
        } else {
            rejected += 1;
        }
    }
    Ok(TheorySample {
        params: *params,
        spec: spec.clone(),
        theories,
        attempts,
        rejected,
    })
}

/// The ordered objective list after filtering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectiveSample {
    pub indices: Vec<BigUint>,
    pub formulas: Vec<Formula>,
    /// Candidates removed because they clashed with earlier survivors.
    pub dropped: Vec<BigUint>,
}

impl ObjectiveSample {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Draws `spec.o` distinct positions, then keeps each candidate in draw
/// order only when it is jointly satisfiable with the ones already kept.
pub fn sample_objectives(params: &GenerationParams, spec: &SampleSpec) -> Result<ObjectiveSample, TheoryError> {
    let size = formula::count(params);
    if BigUint::from(spec.o) > size {
        return Err(TheoryError::InvalidSpec(format!(
            "cannot draw {} distinct objectives from {size} formulas",
            spec.o
        )));
    }
    let mut rng = objective_rng(spec.seed);
    let mut seen = HashSet::new();
    let mut drawn = Vec::with_capacity(spec.o);
    // Small spaces could make rejection slow near o = f; fall back to a shuffle.
    if size.to_usize().is_some_and(|f| f <= 4 * spec.o.max(1)) {
        let f = size.to_usize().unwrap();
        let mut all: Vec<usize> = (1..=f).collect();
        for i in 0..spec.o {
            let k = rand::Rng::gen_range(&mut rng, i..f);
            all.swap(i, k);
            drawn.push(BigUint::from(all[i]));
        }
    } else {
        while drawn.len() < spec.o {
            let idx = rng.gen_biguint_below(&size) + 1u32;
            if seen.insert(idx.clone()) {
                drawn.push(idx);
            }
        }
    }
    let mut out = ObjectiveSample {
        indices: Vec::new(),
        formulas: Vec::new(),
        dropped: Vec::new(),
    };
    for idx in drawn {
        let phi = formula::formula_at(&idx, params)?;
        out.formulas.push(phi);
        if formula::is_satisfiable(&out.formulas) {
            out.indices.push(idx);
        } else {
            out.formulas.pop();
            out.dropped.push(idx);
        }
    }
    if out.is_empty() && spec.o > 0 {
        return Err(TheoryError::NoObjectives { drawn: spec.o });
    }
    debug_assert!(out.indices.iter().all(|i| !i.is_zero()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::gs;
    use std::collections::HashMap;

    #[test]
    fn composition_sums_and_is_roughly_uniform() {
        let mut rng = theory_rng(7);
        let g = BigUint::from(3u32);
        let mut hist: HashMap<Vec<BigUint>, usize> = HashMap::new();
        for _ in 0..20000 {
            let c = composition(&mut rng, &g, 3);
            assert_eq!(c.iter().sum::<BigUint>(), g);
            *hist.entry(c).or_default() += 1;
        }
        // C(5, 2) = 10 compositions of 3 into 3 parts.
        assert_eq!(hist.len(), 10);
        for count in hist.values() {
            assert!((1600..2400).contains(count), "{count}");
        }
    }

    #[test]
    fn class_zero_gives_the_first_formulas() {
        let params = GenerationParams::new(2, 2).unwrap();
        let mut rng = theory_rng(1);
        let t = sample_theory_in_class(&params, 3, &BigUint::zero(), &mut rng).unwrap();
        let expected: Vec<BigUint> = (1u32..=3).map(BigUint::from).collect();
        assert_eq!(t.members(), expected.as_slice());
    }

    #[test]
    fn sampling_is_deterministic() {
        let params = GenerationParams::new(2, 2).unwrap();
        let spec = SampleSpec::new(3, 5, 6, 42);
        let a = sample_theories(&params, &spec).unwrap();
        let b = sample_theories(&params, &spec).unwrap();
        assert_eq!(a.theories, b.theories);
        assert_eq!(a.manifest(), b.manifest());
        for t in &a.theories {
            assert_eq!(t.len(), 3);
            assert!(t.is_satisfiable());
            assert_eq!(gs(&t.jrep()), t.separation().0);
        }
        let o1 = sample_objectives(&params, &spec).unwrap();
        let o2 = sample_objectives(&params, &spec).unwrap();
        assert_eq!(o1, o2);
        assert!(formula::is_satisfiable(&o1.formulas));
        assert_eq!(o1.indices.len() + o1.dropped.len(), 6);
    }

    #[test]
    fn impossible_requests_fail() {
        let params = GenerationParams::new(0, 1).unwrap();
        assert!(matches!(
            sample_theories(&params, &SampleSpec::new(2, 1, 1, 0)),
            Err(TheoryError::TooLarge { .. })
        ));
        assert!(sample_objectives(&params, &SampleSpec::new(1, 1, 2, 0)).is_err());
    }
}
