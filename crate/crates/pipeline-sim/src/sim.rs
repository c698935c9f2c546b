use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::io::Write;

use crate::{ConsumerKind, PipelineConfig, PipelineError};

/// Aggregate statistics from one pipeline run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineStats {
    pub outputs_produced: u64,
    /// Mean spacing between consecutive outputs, in d cycles.
    pub mean_output_period_d: Option<f64>,
    /// Fraction of the horizon the consumer spent waiting for inputs after
    /// its first run began (the initial buffer fill is not counted).
    pub consumer_stall_fraction: f64,
    /// Time-weighted distribution of the total buffered level-1 count.
    pub buffer_occupancy: Vec<f64>,
    pub catalyst_discard_events: u64,
    /// Runs discarded by the consumer's own error detection.
    pub discarded_runs: u64,
    pub bad_outputs: u64,
    /// 1-based index of the first bad output, if any.
    pub first_bad_output_index: Option<u64>,
    pub produced_level1: u64,
    pub consumed_level1: u64,
    pub buffered_level1_end: u64,
    /// Completed level-1 states still held by blocked producers at the end.
    pub blocked_level1_end: u64,
    /// Fraction of producer-time spent blocked on a full buffer.
    pub producer_blocked_fraction: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RunQuality {
    Good,
    /// Undetected error in the consumed batch.
    Bad,
    /// Detected error: the run is discarded.
    Detected,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum EventKind {
    ProducerDone(usize),
    ConsumerDone(RunQuality),
    ConsumerReady,
}

#[derive(Clone, Copy, Debug)]
struct Event {
    time: f64,
    seq: u64,
    kind: EventKind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.time == other.time && self.seq == other.seq
    }
}
impl Eq for Event {}
impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Event {
    // Min-heap: earlier time first, then insertion order.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Producer {
    /// Time a completed state started waiting for buffer space.
    blocked_since: Option<f64>,
}

struct Sim<'a> {
    cfg: &'a PipelineConfig,
    trace: Option<&'a mut dyn Write>,
    rng: ChaCha8Rng,
    queue: BinaryHeap<Event>,
    seq: u64,
    producers: Vec<Producer>,
    /// Buffered level-1 states. Hallway slots are pooled: cross-routing a
    /// state to the far side is assumed free, so any producer can fill any
    /// free slot and the consumer drains from wherever states sit.
    total_buffered: u32,
    pool_capacity: u32,

    consumer_busy: bool,
    first_run_started: bool,
    waiting_since: Option<f64>,
    poisoned: bool,

    stats: PipelineStats,
    first_output_t: Option<f64>,
    last_output_t: Option<f64>,
    stall_time: f64,
    blocked_time: f64,
    occupancy: Vec<f64>,
    last_event_t: f64,
}

impl<'a> Sim<'a> {
    fn push(&mut self, time: f64, kind: EventKind) {
        self.seq += 1;
        self.queue.push(Event {
            time,
            seq: self.seq,
            kind,
        });
    }

    fn trace(&mut self, t: f64, event: &str, detail: &str) -> Result<(), PipelineError> {
        if let Some(out) = self.trace.as_deref_mut() {
            writeln!(out, "{t},{event},{detail},{}", self.total_buffered)
                .map_err(|e| PipelineError::TraceIo(e.to_string()))?;
        }
        Ok(())
    }

    fn advance_clock(&mut self, t: f64) {
        let dt = t - self.last_event_t;
        if dt > 0.0 {
            self.occupancy[self.total_buffered as usize] += dt;
            self.last_event_t = t;
        }
    }

    fn schedule_producer(&mut self, i: usize, t: f64) {
        self.push(t + self.cfg.level1_period_d, EventKind::ProducerDone(i));
    }

    fn on_producer_done(&mut self, i: usize, t: f64) -> Result<(), PipelineError> {
        let discarded = self.rng.gen::<f64>() < self.cfg.level1_discard_prob;
        if discarded {
            self.schedule_producer(i, t);
            self.trace(t, "level1_discard", &format!("p{i}"))?;
            return Ok(());
        }
        if self.total_buffered < self.pool_capacity {
            self.total_buffered += 1;
            self.stats.produced_level1 += 1;
            self.schedule_producer(i, t);
            self.trace(t, "deposit", &format!("p{i}"))?;
            self.try_start_consumer(t)?;
        } else {
            // Hold the completed state; the patch idles until space frees.
            self.producers[i].blocked_since = Some(t);
            self.trace(t, "blocked", &format!("p{i}"))?;
        }
        Ok(())
    }

    fn release_blocked(&mut self, t: f64) -> Result<(), PipelineError> {
        for i in 0..self.producers.len() {
            if self.total_buffered >= self.pool_capacity {
                break;
            }
            if let Some(since) = self.producers[i].blocked_since.take() {
                self.total_buffered += 1;
                self.stats.produced_level1 += 1;
                self.blocked_time += t - since;
                self.schedule_producer(i, t);
                self.trace(t, "released", &format!("p{i}"))?;
            }
        }
        Ok(())
    }

    fn draw_run_quality(&mut self) -> RunQuality {
        let inputs = self.cfg.consumer.inputs_per_run();
        let mut bad_inputs = 0u32;
        if self.cfg.t1_error_prob > 0.0 {
            for _ in 0..inputs {
                if self.rng.gen::<f64>() < self.cfg.t1_error_prob {
                    bad_inputs += 1;
                }
            }
        }
        if bad_inputs % 2 == 1 {
            return RunQuality::Detected;
        }
        if bad_inputs > 0 {
            return RunQuality::Bad;
        }
        if self.cfg.ccz_error_prob > 0.0 && self.rng.gen::<f64>() < self.cfg.ccz_error_prob {
            return RunQuality::Bad;
        }
        RunQuality::Good
    }

    fn try_start_consumer(&mut self, t: f64) -> Result<(), PipelineError> {
        if self.consumer_busy {
            return Ok(());
        }
        let needed = self.cfg.consumer.inputs_per_run();
        if self.total_buffered < needed {
            if self.first_run_started && self.waiting_since.is_none() {
                self.waiting_since = Some(t);
            }
            return Ok(());
        }
        if let Some(since) = self.waiting_since.take() {
            self.stall_time += t - since;
        }
        self.first_run_started = true;
        self.total_buffered -= needed;
        self.stats.consumed_level1 += needed as u64;
        self.trace(t, "run_start", "")?;
        self.release_blocked(t)?;
        let quality = self.draw_run_quality();
        self.consumer_busy = true;
        let done = t + self.cfg.consumer.period_d() + self.cfg.routing_latency_d;
        self.push(done, EventKind::ConsumerDone(quality));
        Ok(())
    }

    fn on_consumer_done(&mut self, quality: RunQuality, t: f64) -> Result<(), PipelineError> {
        self.consumer_busy = false;
        match quality {
            RunQuality::Detected => {
                self.stats.discarded_runs += 1;
                if self.cfg.consumer == ConsumerKind::C2t {
                    // The catalyst was consumed against an unverified state;
                    // discard it and bootstrap a fresh one.
                    self.stats.catalyst_discard_events += 1;
                    self.poisoned = false;
                    self.trace(t, "catalyst_discard", "")?;
                    self.push(t + self.cfg.bootstrap_delay_d, EventKind::ConsumerReady);
                    return Ok(());
                }
                self.trace(t, "run_discarded", "")?;
            }
            RunQuality::Bad | RunQuality::Good => {
                self.stats.outputs_produced += 1;
                if self.first_output_t.is_none() {
                    self.first_output_t = Some(t);
                }
                self.last_output_t = Some(t);
                let bad = match self.cfg.consumer {
                    ConsumerKind::C2t => {
                        if quality == RunQuality::Bad {
                            self.poisoned = true;
                        }
                        self.poisoned
                    }
                    ConsumerKind::Ccz => quality == RunQuality::Bad,
                };
                if bad {
                    self.stats.bad_outputs += 1;
                    if self.stats.first_bad_output_index.is_none() {
                        self.stats.first_bad_output_index = Some(self.stats.outputs_produced);
                    }
                }
                self.trace(t, if bad { "output_bad" } else { "output" }, "")?;
            }
        }
        self.try_start_consumer(t)
    }
}

/// Run the discrete-event simulation described by `config`.
pub fn simulate(config: &PipelineConfig) -> Result<PipelineStats, PipelineError> {
    simulate_impl(config, None)
}

/// Run the simulation and stream a per-event CSV trace
/// (`time_d,event,who,buffered`) to `out`.
pub fn simulate_traced(
    config: &PipelineConfig,
    out: &mut dyn Write,
) -> Result<PipelineStats, PipelineError> {
    writeln!(out, "time_d,event,who,buffered").map_err(|e| PipelineError::TraceIo(e.to_string()))?;
    simulate_impl(config, Some(out))
}

fn simulate_impl(
    config: &PipelineConfig,
    trace: Option<&mut dyn Write>,
) -> Result<PipelineStats, PipelineError> {
    config.validate()?;
    let stats = PipelineStats {
        outputs_produced: 0,
        mean_output_period_d: None,
        consumer_stall_fraction: 0.0,
        buffer_occupancy: Vec::new(),
        catalyst_discard_events: 0,
        discarded_runs: 0,
        bad_outputs: 0,
        first_bad_output_index: None,
        produced_level1: 0,
        consumed_level1: 0,
        buffered_level1_end: 0,
        blocked_level1_end: 0,
        producer_blocked_fraction: 0.0,
    };
    let max_buffered = (config.num_level1 * config.buffer_capacity) as usize;
    let mut sim = Sim {
        cfg: config,
        trace,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        queue: BinaryHeap::new(),
        seq: 0,
        producers: (0..config.num_level1)
            .map(|_| Producer {
                blocked_since: None,
            })
            .collect(),
        total_buffered: 0,
        pool_capacity: config.num_level1 * config.buffer_capacity,
        consumer_busy: false,
        first_run_started: false,
        waiting_since: None,
        poisoned: false,
        stats,
        first_output_t: None,
        last_output_t: None,
        stall_time: 0.0,
        blocked_time: 0.0,
        occupancy: vec![0.0; max_buffered + 1],
        last_event_t: 0.0,
    };

    // Stagger the producers across one period so deposits arrive as an even
    // stream rather than in lockstep bursts.
    for i in 0..config.num_level1 as usize {
        let offset = config.level1_period_d * i as f64 / config.num_level1 as f64;
        sim.push(
            config.level1_period_d + offset,
            EventKind::ProducerDone(i),
        );
    }

    while let Some(event) = sim.queue.pop() {
        if event.time > config.horizon_d {
            break;
        }
        sim.advance_clock(event.time);
        match event.kind {
            EventKind::ProducerDone(i) => sim.on_producer_done(i, event.time)?,
            EventKind::ConsumerDone(q) => sim.on_consumer_done(q, event.time)?,
            EventKind::ConsumerReady => sim.try_start_consumer(event.time)?,
        }
    }
    sim.advance_clock(config.horizon_d);

    let mut stats = sim.stats;
    stats.mean_output_period_d = match (sim.first_output_t, sim.last_output_t) {
        (Some(first), Some(last)) if stats.outputs_produced >= 2 => {
            Some((last - first) / (stats.outputs_produced - 1) as f64)
        }
        _ => None,
    };
    let mut stall = sim.stall_time;
    if let Some(since) = sim.waiting_since {
        stall += config.horizon_d - since;
    }
    let mut blocked = sim.blocked_time;
    for p in &sim.producers {
        if let Some(since) = p.blocked_since {
            blocked += config.horizon_d - since;
        }
        stats.blocked_level1_end += u64::from(p.blocked_since.is_some());
    }
    stats.buffered_level1_end = sim.total_buffered as u64;
    if config.horizon_d > 0.0 {
        stats.consumer_stall_fraction = stall / config.horizon_d;
        stats.producer_blocked_fraction =
            blocked / (config.horizon_d * config.num_level1 as f64);
        stats.buffer_occupancy = sim
            .occupancy
            .iter()
            .map(|t| t / config.horizon_d)
            .collect();
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_horizon_produces_nothing() {
        let mut cfg = PipelineConfig::ccz_default();
        cfg.horizon_d = 0.0;
        let stats = simulate(&cfg).unwrap();
        assert_eq!(stats.outputs_produced, 0);
        assert_eq!(stats.produced_level1, 0);
    }

    #[test]
    fn matched_supply_without_discards_has_a_deterministic_cadence() {
        // Five producers at 3.4375d supply exactly 8 states per 5.5d.
        let cfg = PipelineConfig {
            version: 1,
            num_level1: 5,
            level1_period_d: 5.5 * 5.0 / 8.0,
            level1_discard_prob: 0.0,
            buffer_capacity: 2,
            consumer: ConsumerKind::Ccz,
            ccz_error_prob: 0.0,
            t1_error_prob: 0.0,
            bootstrap_delay_d: 10.0,
            routing_latency_d: 0.0,
            horizon_d: 20_000.0,
            seed: 7,
        };
        let stats = simulate(&cfg).unwrap();
        let mean = stats.mean_output_period_d.unwrap();
        assert!((mean - 5.5).abs() < 1e-9, "mean {mean}");
        assert_eq!(stats.consumer_stall_fraction, 0.0);
        assert_eq!(stats.bad_outputs, 0);
    }

    #[test]
    fn same_seed_same_stats() {
        let cfg = PipelineConfig {
            horizon_d: 30_000.0,
            ..PipelineConfig::ccz_default()
        };
        let a = simulate(&cfg).unwrap();
        let b = simulate(&cfg).unwrap();
        assert_eq!(a.outputs_produced, b.outputs_produced);
        assert_eq!(a.mean_output_period_d, b.mean_output_period_d);
        assert_eq!(a.produced_level1, b.produced_level1);
    }

    #[test]
    fn level1_states_are_conserved() {
        for seed in [1, 2, 3] {
            let cfg = PipelineConfig {
                seed,
                horizon_d: 25_000.0,
                ..PipelineConfig::ccz_default()
            };
            let stats = simulate(&cfg).unwrap();
            assert_eq!(
                stats.produced_level1,
                stats.consumed_level1 + stats.buffered_level1_end,
                "buffered states leaked (seed {seed})"
            );
        }
    }

    #[test]
    fn more_producers_never_slow_the_consumer_and_discards_never_speed_it() {
        let base = PipelineConfig {
            horizon_d: 50_000.0,
            ..PipelineConfig::ccz_default()
        };
        let few = PipelineConfig {
            num_level1: 4,
            ..base.clone()
        };
        let lossy = PipelineConfig {
            level1_discard_prob: 0.15,
            ..base.clone()
        };
        let m_base = simulate(&base).unwrap().mean_output_period_d.unwrap();
        let m_few = simulate(&few).unwrap().mean_output_period_d.unwrap();
        let m_lossy = simulate(&lossy).unwrap().mean_output_period_d.unwrap();
        assert!(m_few >= m_base - 1e-9);
        assert!(m_lossy >= m_base - 1e-9);
        // Mean period never beats the consumer's own period.
        assert!(m_base >= 5.5 - 1e-9);
    }

    #[test]
    fn detected_errors_in_the_c2t_consumer_discard_the_catalyst() {
        let cfg = PipelineConfig {
            t1_error_prob: 1e-3,
            horizon_d: 100_000.0,
            ..PipelineConfig::c2t_default()
        };
        let stats = simulate(&cfg).unwrap();
        assert!(stats.catalyst_discard_events > 0);
        assert_eq!(stats.discarded_runs, stats.catalyst_discard_events);
        // Detected rate per run: odd numbers of bad inputs among eight.
        let runs = stats.outputs_produced + stats.discarded_runs;
        let p_odd = (1.0 - (1.0 - 2.0 * cfg.t1_error_prob).powi(8)) / 2.0;
        let expected = runs as f64 * p_odd;
        let sigma = (runs as f64 * p_odd * (1.0 - p_odd)).sqrt();
        let diff = (stats.catalyst_discard_events as f64 - expected).abs();
        assert!(diff < 4.0 * sigma, "discards {} vs expected {expected:.1}", stats.catalyst_discard_events);
    }

    #[test]
    fn poisoned_catalyst_corrupts_all_later_outputs_until_discard() {
        let cfg = PipelineConfig {
            ccz_error_prob: 5e-3,
            t1_error_prob: 1e-3,
            horizon_d: 200_000.0,
            seed: 5,
            ..PipelineConfig::c2t_default()
        };
        let stats = simulate(&cfg).unwrap();
        assert!(stats.bad_outputs > 0);
        assert!(stats.first_bad_output_index.is_some());
        // Poisoning makes bad outputs clump: far more bad outputs than
        // poisoning events.
        assert!(stats.bad_outputs > 3 * stats.catalyst_discard_events.max(1));
    }

    #[test]
    fn no_error_knobs_no_bad_outputs() {
        let cfg = PipelineConfig {
            horizon_d: 50_000.0,
            ..PipelineConfig::c2t_default()
        };
        let stats = simulate(&cfg).unwrap();
        assert_eq!(stats.bad_outputs, 0);
        assert_eq!(stats.first_bad_output_index, None);
        assert_eq!(stats.catalyst_discard_events, 0);
    }

    #[test]
    fn occupancy_histogram_is_a_distribution() {
        let cfg = PipelineConfig {
            horizon_d: 10_000.0,
            ..PipelineConfig::ccz_default()
        };
        let stats = simulate(&cfg).unwrap();
        let total: f64 = stats.buffer_occupancy.iter().sum();
        assert!((total - 1.0).abs() < 1e-9, "occupancy fractions sum to {total}");
    }
}
