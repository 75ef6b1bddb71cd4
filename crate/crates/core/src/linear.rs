//! Finite linear combinations of ordered basis keys with [`ScalarPoly`] coefficients.

use alloc::collections::BTreeMap;

use crate::scalars::ScalarPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearCombination<K: Ord> {
    terms: BTreeMap<K, ScalarPoly>,
}

impl<K: Ord> Default for LinearCombination<K> {
    fn default() -> Self {
        LinearCombination { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinearCombination<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(key: K, coeff: ScalarPoly) -> Self {
        let mut out = Self::zero();
        out.add_term(key, &coeff);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &ScalarPoly)> {
        self.terms.iter()
    }

    pub fn get(&self, key: &K) -> Option<&ScalarPoly> {
        self.terms.get(key)
    }

    pub fn coeff(&self, key: &K) -> ScalarPoly {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, key: K, coeff: &ScalarPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(slot) => {
                *slot += coeff;
                if slot.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, scale: &ScalarPoly) {
        if scale.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), &(c * scale));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &ScalarPoly::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &ScalarPoly::from_int(-1));
        out
    }

    pub fn scale(&self, c: &ScalarPoly) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&ScalarPoly::from_int(-1))
    }

    /// Applies `f` to every coefficient, dropping terms that become zero.
    pub fn map_coeffs(&self, f: impl Fn(&ScalarPoly) -> ScalarPoly) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &f(c));
        }
        out
    }

    /// Re-keys every term, merging collisions.
    pub fn map_keys<K2: Ord + Clone>(&self, f: impl Fn(&K) -> K2) -> LinearCombination<K2> {
        let mut out = LinearCombination::zero();
        for (k, c) in &self.terms {
            out.add_term(f(k), c);
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&K) -> bool) -> Self {
        LinearCombination {
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }
}

impl<K: Ord + Clone> FromIterator<(K, ScalarPoly)> for LinearCombination<K> {
    fn from_iter<I: IntoIterator<Item = (K, ScalarPoly)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, &c);
        }
        out
    }
}
