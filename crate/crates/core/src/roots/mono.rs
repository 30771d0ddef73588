use std::fmt;

/// Exponent vector over root indices, kept without trailing zeros so that
/// the derived lexicographic order agrees with zero-padded comparison.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct Mono(Vec<u32>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn single(i: usize) -> Self {
        Self::power(i, 1)
    }

    pub fn power(i: usize, k: u32) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = k;
        Self::from_vec(v)
    }

    pub fn from_vec(mut v: Vec<u32>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        Mono(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Indices with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &a)| a > 0).map(|(i, _)| i)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let n = self.0.len().max(o.0.len());
        Mono::from_vec((0..n).map(|i| self.get(i) + o.get(i)).collect())
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().enumerate().all(|(i, &a)| a <= o.get(i))
    }

    /// `o / self`, assuming divisibility.
    pub fn quotient_of(&self, o: &Mono) -> Mono {
        Mono::from_vec((0..o.0.len()).map(|i| o.get(i) - self.get(i)).collect())
    }

    pub fn with(&self, i: usize, k: u32) -> Mono {
        let mut v = self.0.clone();
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] = k;
        Mono::from_vec(v)
    }

    /// `x*Q4^2` given root labels.
    pub fn render(&self, labels: &[String]) -> String {
        let parts: Vec<String> = self
            .support()
            .map(|i| {
                let a = self.0[i];
                let l = &labels[i];
                if a == 1 {
                    l.clone()
                } else if l.contains('^') {
                    format!("({l})^{a}")
                } else {
                    format!("{l}^{a}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
