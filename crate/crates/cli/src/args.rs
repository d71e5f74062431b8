use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use localizer::par::ExecPolicy;
use localizer::pseudospectra::Which;
use localizer::scan::Region;
use localizer::zoo::ZooSpec;

#[derive(Debug, Parser)]
#[command(name = "localizer", version, about = "Clifford and quadratic pseudospectra of Hermitian tuples")]
pub struct Cli {
    /// Print the JSON schema of every output document and exit.
    #[arg(long)]
    pub schema: bool,

    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Comma list of output formats among csv, json, svg.
    #[arg(long, global = true, default_value = "csv,json,svg")]
    pub format: String,

    /// Worker threads; 0 uses every core, 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 20240601)]
    pub seed: u64,

    /// Pseudospectra to evaluate: comma list among c, q, w.
    #[arg(long, global = true, default_value = "c,q")]
    pub which: String,

    /// Zero-set threshold; defaults to the smallest grid spacing.
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the pseudospectra on a grid and write grid.csv, grid.json and heatmap.svg.
    Scan(ScanArgs),
    /// Sample along a line and optionally locate a crossing of the Clifford spectrum.
    Slice(SliceArgs),
    /// Trace the discrete Clifford spectrum of the hemisphere triple.
    Curve(CurveArgs),
    /// Compare numerical values against the closed-form formulas.
    OracleCheck(SuiteArgs),
    /// Run the randomized bound, symmetry and Clifford-relation checks.
    PropertySuite(SuiteArgs),
    /// Produce every figure and check report into the output directory.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ZooArgs {
    /// Example tuple: commuting_points, pauli, two_projection, universal_pair,
    /// hemisphere or position_momentum.
    #[arg(long)]
    pub zoo: String,

    /// Hemisphere parameter b.
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,

    /// Two-projection parameter z in [-1, 1].
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub z: f64,

    /// Truncation size for hemisphere and position_momentum.
    #[arg(long = "n-trunc", default_value_t = 128)]
    pub n_trunc: usize,

    /// Box half-width for position_momentum.
    #[arg(long = "half-width", default_value_t = 12.0)]
    pub half_width: f64,

    /// Points for commuting_points, e.g. "0,0;1,2".
    #[arg(long, allow_hyphen_values = true)]
    pub points: Option<String>,

    /// Fiber spacing for the universal pair, which is evaluated by
    /// minimizing over fibers.
    #[arg(long = "hz", default_value_t = 1e-3)]
    pub h_z: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub zoo: ZooArgs,

    /// Region as lo:hi^d (a cube) or lo:hi,lo:hi,... (one range per axis).
    #[arg(long, allow_hyphen_values = true)]
    pub region: String,

    /// Points per axis, one number or a comma list.
    #[arg(long, default_value = "41")]
    pub res: String,

    /// Probe axes spanned by the region when it has fewer axes than the
    /// tuple has operators, e.g. "0,2" for the (x, 0, z) plane.
    #[arg(long)]
    pub plane: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SliceArgs {
    #[command(flatten)]
    pub zoo: ZooArgs,

    /// Ray origin as a comma list; defaults to the origin.
    #[arg(long, allow_hyphen_values = true)]
    pub origin: Option<String>,

    /// Ray direction as a comma list; normalized before use.
    #[arg(long, allow_hyphen_values = true)]
    pub direction: String,

    /// Parameter range lo:hi.
    #[arg(long, default_value = "0:2", allow_hyphen_values = true)]
    pub t: String,

    /// Number of samples along the ray.
    #[arg(long, default_value_t = 201)]
    pub samples: usize,

    /// Locate a crossing on the sampled range by bisection.
    #[arg(long)]
    pub bisect: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// Values of b, as a comma list.
    #[arg(long, default_value = "1")]
    pub b: String,

    /// Number of z samples.
    #[arg(long = "z-samples", default_value_t = 401)]
    pub z_samples: usize,

    /// Truncation for the null-vector residual column; 0 skips it.
    #[arg(long = "n-trunc", default_value_t = 400)]
    pub n_trunc: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SuiteArgs {
    /// Random cases per check.
    #[arg(long, default_value_t = 1000)]
    pub cases: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Grid points per axis for the heatmaps.
    #[arg(long, default_value_t = 81)]
    pub res: usize,

    /// Random cases per suite check.
    #[arg(long, default_value_t = 200)]
    pub cases: usize,
}

/// Output formats selected by `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl CommonArgs {
    pub fn formats(&self) -> Result<Formats> {
        let mut f = Formats {
            csv: false,
            json: false,
            svg: false,
        };
        for part in self.format.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "csv" => f.csv = true,
                "json" => f.json = true,
                "svg" => f.svg = true,
                other => bail!("unknown format '{other}', expected csv, json or svg"),
            }
        }
        if !(f.csv || f.json || f.svg) {
            bail!("--format selects no output");
        }
        Ok(f)
    }

    pub fn policy(&self) -> ExecPolicy {
        match self.workers {
            0 => ExecPolicy::Auto,
            w => ExecPolicy::with_workers(w),
        }
    }

    pub fn which(&self) -> Result<Which> {
        Ok(Which::parse(&self.which)?)
    }

    pub fn epsilon(&self) -> Result<Option<f64>> {
        match self.epsilon {
            Some(e) if !(e.is_finite() && e > 0.0) => bail!("--epsilon must be positive, got {e}"),
            e => Ok(e),
        }
    }
}

pub fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .with_context(|| format!("{what}: '{p}' is not a number"))
        })
        .collect()
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let (lo, hi) = s
        .split_once(':')
        .with_context(|| format!("range '{s}' must look like lo:hi"))?;
    let lo: f64 = lo.trim().parse().with_context(|| format!("bad lower bound in '{s}'"))?;
    let hi: f64 = hi.trim().parse().with_context(|| format!("bad upper bound in '{s}'"))?;
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        bail!("range '{s}' needs lo < hi");
    }
    Ok((lo, hi))
}

/// Parses `--region` and `--res` into a [`Region`].
pub fn parse_region(region: &str, res: &str) -> Result<Region> {
    let ranges: Vec<(f64, f64)> = if let Some((range, d)) = region.split_once('^') {
        let d: usize = d.trim().parse().with_context(|| format!("bad dimension in '{region}'"))?;
        if d == 0 {
            bail!("region dimension must be at least 1");
        }
        vec![parse_range(range)?; d]
    } else {
        region.split(',').map(parse_range).collect::<Result<_>>()?
    };
    let d = ranges.len();
    let counts: Vec<usize> = res
        .split(',')
        .map(|p| p.trim().parse::<usize>().with_context(|| format!("--res: '{p}' is not a count")))
        .collect::<Result<_>>()?;
    let counts = match counts.len() {
        1 => vec![counts[0]; d],
        n if n == d => counts,
        n => bail!("--res lists {n} counts for a {d}-dimensional region"),
    };
    let (lo, hi) = ranges.into_iter().unzip();
    Ok(Region::new(lo, hi, counts)?)
}

pub fn parse_t_range(s: &str) -> Result<(f64, f64)> {
    parse_range(s)
}

impl ZooArgs {
    pub fn spec(&self) -> Result<ZooSpec> {
        let spec = match self.zoo.as_str() {
            "commuting_points" => {
                let text = self
                    .points
                    .as_deref()
                    .context("commuting_points needs --points, e.g. \"0,0;1,2\"")?;
                let points = text
                    .split(';')
                    .map(|p| parse_list(p, "--points"))
                    .collect::<Result<Vec<_>>>()?;
                ZooSpec::CommutingPoints { points }
            }
            "pauli" => ZooSpec::Pauli,
            "two_projection" => ZooSpec::TwoProjection { z: self.z },
            "universal_pair" => {
                if !(self.h_z > 0.0 && self.h_z <= 1.0) {
                    bail!("--hz must lie in (0, 1], got {}", self.h_z);
                }
                ZooSpec::UniversalPair {
                    fibers: (2.0 / self.h_z).round() as usize + 1,
                }
            }
            "hemisphere" => ZooSpec::Hemisphere { b: self.b, n: self.n_trunc },
            "position_momentum" => ZooSpec::PositionMomentum {
                n: self.n_trunc,
                half_width: self.half_width,
            },
            other => bail!(
                "unknown --zoo '{other}'; expected commuting_points, pauli, two_projection, \
                 universal_pair, hemisphere or position_momentum"
            ),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_and_per_axis_regions() {
        let r = parse_region("-1.5:1.5^3", "41").unwrap();
        assert_eq!(r.d(), 3);
        assert_eq!(r.resolution(), &[41, 41, 41]);
        let r = parse_region("0:1.2,-0.4:1.2", "13,17").unwrap();
        assert_eq!(r.lo(), &[0.0, -0.4]);
        assert_eq!(r.resolution(), &[13, 17]);
    }

    #[test]
    fn malformed_regions_are_rejected() {
        assert!(parse_region("1:-1^2", "5").is_err());
        assert!(parse_region("-1:1^2", "5,5,5").is_err());
        assert!(parse_region("-1..1", "5").is_err());
        assert!(parse_region("-1:1^0", "5").is_err());
    }
}
