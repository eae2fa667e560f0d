use rayon::prelude::*;

use super::ComplexValue;

/// Chunk length of the deterministic reduction tree. Partial sums are formed
/// over consecutive runs of this many items and then combined pairwise, so
/// the rounding sequence never depends on how work was scheduled.
pub const REDUCTION_CHUNK: usize = 1024;

/// Neumaier's compensated accumulator.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Merge another accumulator, keeping the rounding error of the merge.
    #[inline]
    pub fn merge(mut self, other: Neumaier) -> Neumaier {
        self.add(other.sum);
        self.comp += other.comp;
        self
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NeumaierComplex {
    re: Neumaier,
    im: Neumaier,
}

impl NeumaierComplex {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: ComplexValue) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn merge(self, other: NeumaierComplex) -> NeumaierComplex {
        NeumaierComplex {
            re: self.re.merge(other.re),
            im: self.im.merge(other.im),
        }
    }

    pub fn value(&self) -> ComplexValue {
        ComplexValue::new(self.re.value(), self.im.value())
    }
}

/// Evaluate `chunk` on consecutive index ranges of length
/// [`REDUCTION_CHUNK`] covering `0..total` (in parallel when a rayon pool is
/// available) and fold the results with a fixed pairwise tree.
pub fn chunked_tree_reduce<A, F, M>(total: usize, identity: A, chunk: F, merge: M) -> A
where
    A: Send + Clone,
    F: Fn(std::ops::Range<usize>) -> A + Sync,
    M: Fn(A, A) -> A,
{
    let chunks = total.div_ceil(REDUCTION_CHUNK);
    let partials: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * REDUCTION_CHUNK;
            chunk(start..(start + REDUCTION_CHUNK).min(total))
        })
        .collect();
    tree_fold(partials, identity, merge)
}

fn tree_fold<A: Clone, M: Fn(A, A) -> A>(mut level: Vec<A>, identity: A, merge: M) -> A {
    if level.is_empty() {
        return identity;
    }
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(merge(a, b)),
                None => next.push(a),
            }
        }
        level = next;
    }
    level.pop().unwrap_or(identity)
}

/// Compensated sum of complex values with a fixed reduction order.
pub fn compensated_sum(values: &[ComplexValue]) -> ComplexValue {
    chunked_tree_reduce(
        values.len(),
        NeumaierComplex::new(),
        |range| {
            let mut acc = NeumaierComplex::new();
            for z in &values[range] {
                acc.add(*z);
            }
            acc
        },
        NeumaierComplex::merge,
    )
    .value()
}

/// Real counterpart of [`compensated_sum`].
pub fn compensated_sum_real(values: &[f64]) -> f64 {
    chunked_tree_reduce(
        values.len(),
        Neumaier::new(),
        |range| {
            let mut acc = Neumaier::new();
            for x in &values[range] {
                acc.add(*x);
            }
            acc
        },
        Neumaier::merge,
    )
    .value()
}
