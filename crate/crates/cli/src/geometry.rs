use std::path::{Path, PathBuf};

use clap::{Subcommand, ValueEnum};

use pertinv::charges::ChargeSystem;
use pertinv::formats::{curves_to_json, parse_charges, parse_curves, select_curve, NamedCurve};
use pertinv::geom2d::{apply_area_preserving, build_arrangement, j_invariant, jittered, ym_s0, AreaMap, PolyCurve2};
use pertinv::geom3d::{cs_s0, linking_number_exact, linking_number_quadrature, PolyCurve3};
use pertinv::rational::{fmt_q, to_f64};
use pertinv::Exec;

use crate::error::{read_file, CliError};
use crate::output::Output;

#[derive(Clone, Copy, ValueEnum)]
pub enum Method {
    Exact,
    Quad,
}

#[derive(Subcommand)]
pub enum LinkCmd {
    /// Linking number of two curves.
    Lk {
        #[arg(long)]
        curves: PathBuf,
        /// Curve id (or position) of the first component.
        #[arg(long)]
        i: String,
        #[arg(long)]
        j: String,
        #[arg(long, value_enum, default_value = "exact")]
        method: Method,
        /// Quadrature samples per edge.
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// 1/4 sum over i != j of Tr(c_i, c_j) lk(i, j).
    S0 {
        #[arg(long)]
        curves: PathBuf,
        #[arg(long)]
        charges: PathBuf,
    },
}

fn curves3(named: &[NamedCurve]) -> Result<Vec<PolyCurve3>, CliError> {
    named
        .iter()
        .map(|c| {
            let vs = c.vertices.iter().map(|v| [to_f64(&v[0]), to_f64(&v[1]), to_f64(&v[2])]).collect();
            PolyCurve3::new(vs).map_err(|e| CliError::Geometry(format!("curve {:?}: {e}", c.id)))
        })
        .collect()
}

fn load_charges(path: &Path, curve_count: usize) -> Result<ChargeSystem, CliError> {
    let charges = parse_charges(&read_file(path)?)?;
    if charges.len() != curve_count {
        return Err(CliError::Input(format!("{} charges for {curve_count} curves", charges.len())));
    }
    Ok(charges)
}

pub fn link(cmd: LinkCmd, out: &mut Output) -> Result<(), CliError> {
    match cmd {
        LinkCmd::Lk { curves, i, j, method, samples } => {
            let named = parse_curves(&read_file(&curves)?, 3)?;
            let (a, b) = (select_curve(&named, &i)?, select_curve(&named, &j)?);
            let cs = curves3(&named)?;
            match method {
                Method::Exact => out.primary("lk", linking_number_exact(&cs[a], &cs[b])?),
                Method::Quad => {
                    out.primary("lk", linking_number_quadrature(&cs[a], &cs[b], samples as usize, Exec::default()))
                }
            }
        }
        LinkCmd::S0 { curves, charges } => {
            let named = parse_curves(&read_file(&curves)?, 3)?;
            let cs = curves3(&named)?;
            let charges = load_charges(&charges, cs.len())?;
            out.primary("s0", fmt_q(&cs_s0(&cs, &charges)?));
        }
    }
    Ok(())
}

#[derive(clap::Args)]
pub struct PlanarInput {
    #[arg(long)]
    curves: PathBuf,
    /// Perturb every vertex by at most this much before building the arrangement.
    #[arg(long)]
    jitter: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn load_planar(input: &PlanarInput) -> Result<(Vec<NamedCurve>, Vec<PolyCurve2>), CliError> {
    let named = parse_curves(&read_file(&input.curves)?, 2)?;
    let mut curves = Vec::with_capacity(named.len());
    for (k, c) in named.iter().enumerate() {
        let curve = PolyCurve2::new(c.vertices.iter().map(|v| [v[0].clone(), v[1].clone()]).collect())
            .map_err(|e| CliError::Geometry(format!("curve {:?}: {e}", c.id)))?;
        let curve = match input.jitter {
            Some(eps) if eps.is_finite() && eps > 0.0 => jittered(&curve, eps, input.seed.wrapping_add(k as u64))?,
            Some(eps) => return Err(CliError::Input(format!("jitter must be positive, got {eps}"))),
            None => curve,
        };
        curves.push(curve);
    }
    Ok((named, curves))
}

#[derive(Subcommand)]
pub enum PlanarCmd {
    /// J(i, j) = sum over faces of area * w_i * w_j.
    J {
        #[command(flatten)]
        input: PlanarInput,
        #[arg(long)]
        i: String,
        #[arg(long)]
        j: String,
    },
    /// sum over i, j of Tr(c_i, c_j) J(i, j).
    S0 {
        #[command(flatten)]
        input: PlanarInput,
        #[arg(long)]
        charges: PathBuf,
    },
    /// Applies an area-preserving map and prints the new curve document.
    Transform {
        #[command(flatten)]
        input: PlanarInput,
        /// shear:S, rotate:TURNS or nlshear:C0,C1,...
        #[arg(long)]
        map: String,
        /// Points per edge for nonlinear maps.
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        resample: u64,
    },
}

pub fn planar(cmd: PlanarCmd, out: &mut Output) -> Result<(), CliError> {
    match cmd {
        PlanarCmd::J { input, i, j } => {
            let (named, curves) = load_planar(&input)?;
            let (a, b) = (select_curve(&named, &i)?, select_curve(&named, &j)?);
            let arr = build_arrangement(&curves)?;
            out.primary("j", fmt_q(&j_invariant(&arr, a, b)));
        }
        PlanarCmd::S0 { input, charges } => {
            let (_, curves) = load_planar(&input)?;
            let charges = load_charges(&charges, curves.len())?;
            let arr = build_arrangement(&curves)?;
            out.primary("s0", fmt_q(&ym_s0(&arr, &charges)));
        }
        PlanarCmd::Transform { input, map, resample } => {
            let map: AreaMap = map.parse().map_err(|e: pertinv::geom2d::ParseMapError| CliError::Input(e.to_string()))?;
            let (named, curves) = load_planar(&input)?;
            let mut doc = Vec::with_capacity(curves.len());
            for (n, c) in named.iter().zip(&curves) {
                let image = apply_area_preserving(c, &map, resample as usize)?;
                doc.push((n.id.clone(), image.vertices().iter().map(|p| p.to_vec()).collect()));
            }
            let text = curves_to_json(&doc);
            if out.is_machine() {
                let compact: serde_json::Value = serde_json::from_str(&text).expect("valid document");
                out.primary("curves", compact);
            } else {
                out.primary("curves", text);
            }
        }
    }
    Ok(())
}
