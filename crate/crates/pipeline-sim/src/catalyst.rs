use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Monte Carlo statistics of correlated catalyst errors over a fixed-length
/// campaign of factory runs.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CatalystStats {
    pub trials: u64,
    /// Fraction of campaigns with at least one bad output.
    pub p_any_bad: f64,
    pub p_any_std_err: f64,
    /// Mean number of bad outputs per campaign.
    pub mean_bad_count: f64,
    pub mean_std_err: f64,
}

/// Closed form for the any-bad probability: 1 - (1-eps)^n. Grows like n·eps,
/// not n²·eps, because one poisoning event explains every later bad output.
pub fn p_any_bad_closed_form(eps: f64, n_runs: u32) -> f64 {
    1.0 - (1.0 - eps).powi(n_runs as i32)
}

/// Closed form for the mean bad-output count: sum over runs of the
/// probability the catalyst is already poisoned, Σ_{k=1..n} (1-(1-eps)^k).
pub fn mean_bad_closed_form(eps: f64, n_runs: u32) -> f64 {
    (1..=n_runs)
        .map(|k| 1.0 - (1.0 - eps).powi(k as i32))
        .sum()
}

/// Simulate `trials` campaigns of `n_runs` catalyzed runs where each
/// consumed state is erroneous with probability `eps` and a single error
/// poisons the catalyst for the rest of the campaign.
pub fn catalyst_error_stats(n_runs: u32, eps: f64, trials: u64, seed: u64) -> CatalystStats {
    let mut any = 0u64;
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let mut poisoned = false;
        let mut bad = 0u32;
        for _ in 0..n_runs {
            if !poisoned && rng.gen::<f64>() < eps {
                poisoned = true;
            }
            if poisoned {
                bad += 1;
            }
        }
        if bad > 0 {
            any += 1;
        }
        sum += bad as f64;
        sum_sq += (bad as f64) * (bad as f64);
    }
    let n = trials as f64;
    let p_any = any as f64 / n;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    CatalystStats {
        trials,
        p_any_bad: p_any,
        p_any_std_err: (p_any * (1.0 - p_any) / n).sqrt(),
        mean_bad_count: mean,
        mean_std_err: (var / n).sqrt(),
    }
}
