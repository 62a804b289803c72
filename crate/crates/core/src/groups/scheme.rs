use crate::error::{input, Result};
use crate::exactlin::{validate_prime, PrimeSet, RationalVector};

/// One summand `Z[1/π] v` of a generator scheme.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub vector: RationalVector,
    pub inverted_primes: PrimeSet,
}

/// A group given as `Σ Z[1/π_i] v_i` inside `Q^n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GeneratorScheme {
    pub ambient: usize,
    pub generators: Vec<Generator>,
}

impl GeneratorScheme {
    pub fn new(ambient: usize) -> Self {
        Self { ambient, generators: Vec::new() }
    }

    pub fn with(mut self, vector: RationalVector, primes: impl IntoIterator<Item = u64>) -> Self {
        self.push(vector, primes);
        self
    }

    pub fn push(&mut self, vector: RationalVector, primes: impl IntoIterator<Item = u64>) {
        self.generators.push(Generator { vector, inverted_primes: primes.into_iter().collect() });
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn support(&self) -> PrimeSet {
        self.generators.iter().flat_map(|g| g.inverted_primes.iter().copied()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.generators.iter().enumerate() {
            if g.vector.len() != self.ambient {
                return input(format!(
                    "generator {i} has length {} but the ambient rank is {}",
                    g.vector.len(),
                    self.ambient
                ));
            }
            for &p in &g.inverted_primes {
                validate_prime(p).map_err(|e| crate::Error::Input(format!("generator {i}: {e}")))?;
            }
        }
        Ok(())
    }
}
