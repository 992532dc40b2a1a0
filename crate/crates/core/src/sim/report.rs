//! CSV and gnuplot output.

use super::{SimConfig, SimResult};
use crate::channel::ChannelSpec;
use crate::fading::EnvelopeStats;
use crate::numerics::RngStream;
use crate::{Error, Result};
use std::fmt::Write;

pub const CSV_HEADER: &str =
    "x,frames,frame_errors,fer,fer_ci_lo,fer_ci_hi,bits,bit_errors,ber,ber_ci_lo,ber_ci_hi";

/// Formats like C's `%g`: 6 significant digits, trailing zeros removed,
/// exponent form below 1e-4 or from 1e6 up.
pub fn format_g6(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn push_channel(out: &mut String, c: &ChannelSpec) {
    let f = &c.fading;
    let _ = writeln!(out, "# n_tx={}", c.n_tx);
    let _ = writeln!(out, "# n_rx={}", c.n_rx);
    let _ = writeln!(out, "# fading={}", f.model.name());
    let _ = writeln!(out, "# k_factor={}", f.k_factor);
    let _ = writeln!(out, "# max_doppler_hz={}", f.max_doppler_hz);
    let _ = writeln!(out, "# los_doppler_hz={}", f.los_doppler_hz);
    let _ = writeln!(out, "# los_phase_rad={}", f.los_phase_rad);
    let _ = writeln!(out, "# sample_rate_hz={}", f.sample_rate_hz);
    let _ = writeln!(out, "# num_sinusoids={}", f.num_sinusoids);
    let _ = writeln!(out, "# tx_correlation={}", c.tx_correlation);
    let _ = writeln!(out, "# rx_correlation={}", c.rx_correlation);
    let _ = writeln!(out, "# path_gain_db={}", c.path_gain_db);
}

/// Config echo as `# key=value` lines, a header row, one row per point.
pub fn emit_csv(result: &SimResult, config: &SimConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# experiment={}", config.experiment);
    let _ = writeln!(out, "# master_seed={}", config.master_seed);
    let _ = writeln!(out, "# rng={}", RngStream::ALGORITHM);
    push_channel(&mut out, &config.channel);
    let _ = writeln!(
        out,
        "# code={}",
        config
            .code
            .map_or_else(|| "none".to_string(), |c| c.to_string())
    );
    let _ = writeln!(
        out,
        "# detector={}",
        config.detector.map_or("none", |d| d.name())
    );
    if !config.experiment.uses_ostbc() {
        let _ = writeln!(out, "# channel_draw=iid rayleigh per symbol vector");
    }
    let _ = writeln!(out, "# frame_bits={}", config.frame_bits);
    let _ = writeln!(out, "# snr_db={}", config.snr_db);
    let _ = writeln!(
        out,
        "# snr_definition=total transmit energy per channel use / noise power per receive antenna"
    );
    let sweep: Vec<String> = config.sweep.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(out, "# sweep={}", sweep.join(";"));
    let _ = writeln!(out, "# x_axis={}", config.experiment.x_label());
    let _ = writeln!(out, "# max_frames={}", config.max_frames);
    let _ = writeln!(out, "# target_frame_errors={}", config.target_frame_errors);
    let _ = writeln!(out, "# ci=wilson 95%");
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in &result.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            format_g6(p.x),
            p.frames,
            p.frame_errors,
            format_g6(p.fer),
            format_g6(p.ci95_fer.0),
            format_g6(p.ci95_fer.1),
            p.bits,
            p.bit_errors,
            format_g6(p.ber),
            format_g6(p.ci95_ber.0),
            format_g6(p.ci95_ber.1),
        );
    }
    out
}

/// One data row of an emitted CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub x: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub fer: f64,
    pub fer_ci: (f64, f64),
    pub bits: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub ber_ci: (f64, f64),
}

/// Parses the data rows of [`emit_csv`] output, skipping comments.
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(Error::Domain(format!("unexpected CSV header {other:?}"))),
    }
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 11 {
                return Err(Error::Domain(format!("expected 11 fields in '{line}'")));
            }
            let real = |i: usize| {
                f[i].parse::<f64>()
                    .map_err(|_| Error::Domain(format!("bad number '{}'", f[i])))
            };
            let int = |i: usize| {
                f[i].parse::<u64>()
                    .map_err(|_| Error::Domain(format!("bad count '{}'", f[i])))
            };
            Ok(CsvRow {
                x: real(0)?,
                frames: int(1)?,
                frame_errors: int(2)?,
                fer: real(3)?,
                fer_ci: (real(4)?, real(5)?),
                bits: int(6)?,
                bit_errors: int(7)?,
                ber: real(8)?,
                ber_ci: (real(9)?, real(10)?),
            })
        })
        .collect()
}

/// Gnuplot script plotting the CSV at `csv_path` with error bars.
pub fn gnuplot_script(csv_path: &str, config: &SimConfig) -> String {
    let (column, lo, hi, label) = if config.experiment.uses_ostbc() {
        (4, 5, 6, "frame error rate")
    } else {
        (9, 10, 11, "bit error rate")
    };
    let logx = if config.experiment == super::Experiment::FerVsSampleRate {
        "set logscale x\n"
    } else {
        ""
    };
    let title = format!(
        "{} ({}, seed {})",
        config.experiment,
        config.channel.fading.model.name(),
        config.master_seed
    );
    format!(
        "set datafile separator ','\n\
         set datafile commentschars '#'\n\
         set key autotitle columnhead\n\
         set title '{title}'\n\
         set xlabel '{xl}'\n\
         set ylabel '{label}'\n\
         set logscale y\n\
         {logx}set grid\n\
         plot '{csv_path}' using 1:{column}:{lo}:{hi} with yerrorlines title '{label}'\n",
        xl = config.experiment.x_label(),
    )
}

/// Envelope statistics as CSV: summary comments, then one row per lag.
pub fn fading_stats_csv(
    stats: &EnvelopeStats,
    spec: &crate::fading::FadingSpec,
    samples: usize,
    seed: u64,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# experiment=validate-fading");
    let _ = writeln!(out, "# master_seed={seed}");
    let _ = writeln!(out, "# rng={}", RngStream::ALGORITHM);
    let _ = writeln!(out, "# fading={}", spec.model.name());
    let _ = writeln!(out, "# k_factor={}", spec.k_factor);
    let _ = writeln!(out, "# max_doppler_hz={}", spec.max_doppler_hz);
    let _ = writeln!(out, "# los_doppler_hz={}", spec.los_doppler_hz);
    let _ = writeln!(out, "# los_phase_rad={}", spec.los_phase_rad);
    let _ = writeln!(out, "# sample_rate_hz={}", spec.sample_rate_hz);
    let _ = writeln!(out, "# num_sinusoids={}", spec.num_sinusoids);
    let _ = writeln!(out, "# samples={samples}");
    let _ = writeln!(out, "# ks_statistic={}", format_g6(stats.ks_statistic));
    let _ = writeln!(
        out,
        "# empirical_mean_power={}",
        format_g6(stats.empirical_mean_power)
    );
    let _ = writeln!(out, "# autocorr_rmse={}", format_g6(stats.autocorr_rmse()));
    out.push_str("lag_s,empirical,theoretical\n");
    for (lag, e, t) in &stats.autocorr_lags {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_g6(*lag),
            format_g6(*e),
            format_g6(*t)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g6_formatting() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (123456.0, "123456"),
            (1234567.0, "1.23457e+06"),
            (2e6, "2e+06"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (-3.25, "-3.25"),
            (0.123456789, "0.123457"),
            (99999.95, "99999.9"),
            (999999.5, "1e+06"),
            (1e-300, "1e-300"),
            (-20.0, "-20"),
        ];
        for (x, s) in cases {
            assert_eq!(format_g6(x), s, "{x}");
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_csv("nope\n1,2").is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n1,2,3\n")).is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n")).unwrap().is_empty());
    }
}
