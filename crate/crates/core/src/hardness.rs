//! Generators for the two lower-bound instance families: a shattered
//! independent set with a skewed distribution, and a bichromatic independent
//! set with perturbed weights.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::BitString;
use crate::concepts::{Concept, ConceptClass};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexId};
use crate::measure::{weighted_average, Distribution, LabeledSample};
use crate::params::{alpha1, alpha2_concept};

/// A shattered independent set `I`; the anchor `I[0]` carries `1 - 8ε'` and
/// the other points share `8ε'` equally.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShatteredISInstance {
    pub n: usize,
    pub independent_set: Vec<VertexId>,
    pub anchor: VertexId,
    pub eps_prime: f64,
}

pub fn gen_shattered_instance(
    g: &DirectedGraph,
    cc: &ConceptClass,
    eps_prime: f64,
    budget: u64,
) -> Result<ShatteredISInstance> {
    if !(eps_prime > 0.0 && eps_prime <= 0.125) {
        return Err(Error::arg(format!("eps' = {eps_prime} outside (0, 1/8]")));
    }
    let witness = alpha1(g, cc, budget)?;
    if witness.size < 2 {
        return Err(Error::Precondition(format!(
            "alpha1 = {} but the shattered-set family needs alpha1 >= 2",
            witness.size
        )));
    }
    Ok(ShatteredISInstance {
        n: g.order(),
        anchor: witness.witness[0],
        independent_set: witness.witness,
        eps_prime,
    })
}

impl ShatteredISInstance {
    pub fn distribution(&self) -> Distribution {
        let mut w = vec![0.0; self.n];
        let rest = self.independent_set.len() - 1;
        for &v in &self.independent_set[1..] {
            w[v] = 8.0 * self.eps_prime / rest as f64;
        }
        w[self.anchor] = 1.0 - 8.0 * self.eps_prime;
        Distribution::from_unnormalized(w).expect("weights are non-negative with total 1")
    }

    /// The first class member with the given labels on `I` (in `I` order).
    pub fn target(&self, cc: &ConceptClass, pattern: &BitString) -> Result<Concept> {
        if pattern.len() != self.independent_set.len() {
            return Err(Error::arg(format!(
                "pattern of length {} for a set of size {}",
                pattern.len(),
                self.independent_set.len()
            )));
        }
        let items = self
            .independent_set
            .iter()
            .zip(pattern.iter())
            .map(|(&v, y)| (v, y))
            .collect();
        cc.first_consistent(&LabeledSample::new(items)?)?
            .ok_or_else(|| Error::Precondition("the set is not shattered by the class".into()))
    }

    /// A target whose pattern on `I` is uniform over all `2^|I|` patterns.
    pub fn random_target(&self, cc: &ConceptClass, seed: u64) -> Result<Concept> {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pattern = BitString::from_bools((0..self.independent_set.len()).map(|_| rng.gen::<bool>()));
        self.target(cc, &pattern)
    }
}

/// Zero-sum vector of ±1 signs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignString {
    signs: Vec<i8>,
}

impl SignString {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::arg("signs must be +1 or -1"));
        }
        if signs.iter().map(|&s| s as i64).sum::<i64>() != 0 {
            return Err(Error::arg("signs must sum to zero"));
        }
        Ok(SignString { signs })
    }

    pub fn alternating(k: usize) -> Result<Self> {
        Self::new((0..k).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect())
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }
}

/// Uniform zero-sum sign string: a shuffle of `K/2` pluses and `K/2` minuses.
pub fn sample_sign_string(k: usize, seed: u64) -> Result<SignString> {
    if k % 2 == 1 {
        return Err(Error::arg(format!("sign strings need even length, got {k}")));
    }
    let mut signs: Vec<i8> = (0..k).map(|i| if i < k / 2 { 1 } else { -1 }).collect();
    signs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok(SignString { signs })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BichromaticLBInstance {
    pub n: usize,
    pub concept: Concept,
    /// Sorted; all share `label_a`, pairwise non-adjacent.
    pub a_prime: Vec<VertexId>,
    /// Sorted; all labeled `!label_a`.
    pub b_prime: Vec<VertexId>,
    pub label_a: bool,
    pub d: usize,
    pub eps: f64,
    pub p_x: f64,
    pub p_z: f64,
}

/// Replays the lower-bound construction on the α2 witness of `(g, c)`.
pub fn gen_bichromatic_instance(
    g: &DirectedGraph,
    c: &Concept,
    eps: f64,
    budget: u64,
) -> Result<BichromaticLBInstance> {
    if !(eps > 0.0 && eps < 0.25) {
        return Err(Error::arg(format!("eps = {eps} outside (0, 1/4)")));
    }
    let a = alpha2_concept(g, c, budget)?;
    if a.size < 2 {
        return Err(Error::Precondition(format!(
            "alpha2 = {} but the bichromatic family needs alpha2 >= 2",
            a.size
        )));
    }
    let ones = a.witness.iter().filter(|&&v| c.get(v)).count();
    let zeros = a.size - ones;
    let label_a = if ones == zeros {
        c.get(a.witness[0])
    } else {
        ones > zeros
    };
    let a_maj: Vec<VertexId> = a.witness.iter().copied().filter(|&v| c.get(v) == label_a).collect();

    let mut in_b = vec![false; g.order()];
    for &x in &a_maj {
        let z = g
            .out_neighbors(x)
            .iter()
            .copied()
            .find(|&u| c.get(u) != label_a)
            .expect("witness vertices are bichromatic");
        in_b[z] = true;
    }
    let d_b = |x: VertexId| g.out_neighbors(x).iter().filter(|&&u| in_b[u]).count();

    // bin by floor(log2 d_B(x)); ties between bin sizes go to the lower bin
    let mut bins: std::collections::BTreeMap<u32, Vec<VertexId>> = Default::default();
    for &x in &a_maj {
        bins.entry(d_b(x).ilog2()).or_default().push(x);
    }
    let (&j, _) = bins
        .iter()
        .rev()
        .max_by_key(|(_, members)| members.len())
        .expect("at least one bin");
    let mut a_prime = bins.remove(&j).expect("chosen bin");
    let d = 1usize << j;
    if a_prime.len() % 2 == 1 {
        a_prime.pop();
    }
    let k = a_prime.len();
    if k < 2 {
        return Err(Error::Precondition(format!(
            "largest degree bin has {} vertex; need at least 2 after even truncation",
            k + 1
        )));
    }

    let mut in_b_prime = vec![false; g.order()];
    for &x in &a_prime {
        for &u in g.out_neighbors(x) {
            if in_b[u] {
                in_b_prime[u] = true;
            }
        }
    }
    let b_prime: Vec<VertexId> = (0..g.order()).filter(|&v| in_b_prime[v]).collect();
    let denom = (d * k + b_prime.len()) as f64;
    Ok(BichromaticLBInstance {
        n: g.order(),
        concept: c.clone(),
        a_prime,
        b_prime,
        label_a,
        d,
        eps,
        p_x: d as f64 / denom,
        p_z: 1.0 / denom,
    })
}

impl BichromaticLBInstance {
    /// `K = |A'|`.
    pub fn k(&self) -> usize {
        self.a_prime.len()
    }

    pub fn base_weights(&self) -> Vec<f64> {
        self.raw_weights(|_| 0.0)
    }

    fn raw_weights(&self, shift: impl Fn(usize) -> f64) -> Vec<f64> {
        let mut w = vec![0.0; self.n];
        for &z in &self.b_prime {
            w[z] = self.p_z;
        }
        for (i, &x) in self.a_prime.iter().enumerate() {
            w[x] = self.p_x * (1.0 + shift(i));
        }
        w
    }

    pub fn check_signs(&self, s: &SignString) -> Result<()> {
        if s.len() != self.k() {
            return Err(Error::arg(format!(
                "sign string of length {} for K = {}",
                s.len(),
                self.k()
            )));
        }
        Ok(())
    }

    /// `D_s(x_i) = p_x (1 + s_i √ε)` on `A'`, `p_z` on `B'`, zero elsewhere.
    pub fn perturbed_distribution(&self, s: &SignString) -> Result<Distribution> {
        self.check_signs(s)?;
        let root = self.eps.sqrt();
        Distribution::new(self.raw_weights(|i| s.signs()[i] as f64 * root))
    }

    /// `|y(x_i)|` difference between `s_i = +1` and `s_i = -1`. The other
    /// signs do not matter: `A'` is independent, so `N[x_i]` meets the
    /// support only in `x_i` and `B'`.
    pub fn y_gap(&self, g: &DirectedGraph, i: usize) -> Result<f64> {
        let x = *self
            .a_prime
            .get(i)
            .ok_or_else(|| Error::arg(format!("index {i} outside A'")))?;
        let root = self.eps.sqrt();
        let plus = self.raw_weights(|j| if j == i { root } else { 0.0 });
        let minus = self.raw_weights(|j| if j == i { -root } else { 0.0 });
        let y_plus = weighted_average(g, &plus, &self.concept, x)?;
        let y_minus = weighted_average(g, &minus, &self.concept, x)?;
        Ok((y_plus - y_minus).abs())
    }
}

/// Serializable summary of a generated instance, for the command line.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum InstanceDump {
    Shattered {
        instance: ShatteredISInstance,
        concept: Concept,
        distribution: Distribution,
    },
    Bichromatic {
        instance: BichromaticLBInstance,
        signs: SignString,
        distribution: Distribution,
    },
}
