//! Small shared helpers: deterministic RNG, deterministic parallel map,
//! scalar minimization, number formatting.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Seeded RNG used everywhere randomness is needed. Same seed, same stream,
/// on every platform.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Parallel map that preserves input order in the output, so any later fold
/// over the results is independent of thread scheduling.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Index of the maximum value under total ordering, first index winning ties.
/// Returns None for an empty slice.
pub fn argmax_total(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        match best {
            None => best = Some(i),
            Some(b) => {
                if v.total_cmp(&values[b]) == std::cmp::Ordering::Greater {
                    best = Some(i);
                }
            }
        }
    }
    best
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Runs a fixed number of shrink steps, so the cost and the result are fully
/// deterministic. Returns `(x, f(x))` at the best probe seen. Intended for
/// smooth unimodal sections; callers that face multimodal objectives should
/// pre-bracket with a coarse grid.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, steps: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..steps {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Format with a fixed number of significant digits, plain decimal notation.
/// Used for human-facing CLI output only; machine reports serialize floats
/// with the default shortest round-trip form.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return format!("{:.*}", sig.saturating_sub(1), 0.0);
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - mag).max(0) as usize;
    format!("{:.*}", decimals, x)
}
