//! One experiment: build, flow, analyse and write artifacts.

use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use ricci_mesh::analysis::{
    aligned_cycles, default_pde_step, fit_exponential, fit_power, gowdy_pde_solve, nil_abc_series, nil_analytic,
    rc_error_table, FitRecord, FitResult, GowdyCurvatures, NilAbc, ThetaProbe,
};
use ricci_mesh::flow::evolve;
use ricci_mesh::numfmt::sig17;
use ricci_mesh::{FlowTrace, ManifoldBuild};
use serde::Serialize;

use crate::config::{ExperimentConfig, Manifold};

/// Where the Gowdy curvatures are sampled.
pub const GOWDY_THETA: f64 = PI / 3.0;
/// Last time used by the Gowdy decay fits.
pub const GOWDY_FIT_END: f64 = 0.7;
/// Grid points of the Gowdy PDE reference.
pub const GOWDY_PDE_POINTS: usize = 384;
/// Tolerance for the Regge identity and the volume partition on every record.
pub const INVARIANT_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct NilAnalysis {
    pub series: Vec<(f64, NilAbc)>,
    pub exact: Vec<NilAbc>,
    /// Power-law fits of A, B and C.
    pub fits: [FitResult; 3],
}

#[derive(Debug, Clone)]
pub struct GowdyAnalysis {
    /// `(t, R, Rc_y)` at the probe vertex and y-edge.
    pub probe: Vec<(f64, f64, f64)>,
    /// The same observables from the PDE reference.
    pub pde_probe: Vec<(f64, f64, f64)>,
    /// Decay fits of R and Rc_y.
    pub fits: [FitResult; 2],
    pub pde_fits: [FitResult; 2],
    /// `(t, mean edge error as a percentage of the mean Ricci magnitude)`.
    pub errors: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub t: f64,
    pub axis: usize,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone)]
pub enum Analysis {
    Nil(NilAnalysis),
    Gowdy(GowdyAnalysis),
    Curves(Vec<CurveRow>),
}

#[derive(Debug)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub build: ManifoldBuild,
    pub trace: FlowTrace,
    pub analysis: Analysis,
}

const AXES: [&str; 3] = ["x", "y", "z"];
const TORUS_AXES: [&str; 3] = ["theta", "phi", "psi"];

impl Experiment {
    /// Coordinate names used in column headers.
    pub fn axis_names(&self) -> [&'static str; 3] {
        match self.config.manifold {
            Manifold::Torus4 => TORUS_AXES,
            _ => AXES,
        }
    }

    pub fn run(config: &ExperimentConfig) -> Result<Self> {
        let build = config.build().with_context(|| format!("building {}", config.label()))?;
        let flow = build
            .flow_config(config.dt, config.steps)
            .normalized(config.normalized)
            .stride(config.stride);
        let trace = evolve(&build.complex, &build.initial, &flow);
        if let Some(e) = &trace.error {
            bail!("flow of {} stopped after {} records: {e}", config.label(), trace.records.len());
        }
        check_invariants(&trace)?;
        let analysis = match config.manifold {
            Manifold::Nil => Analysis::Nil(nil_analysis(config, &build, &trace)?),
            Manifold::Gowdy => Analysis::Gowdy(gowdy_analysis(&build, &trace)?),
            Manifold::Torus4 | Manifold::Flat => Analysis::Curves(curves(&build, &trace, &[0, 1, 2])?),
            Manifold::Perturbed => Analysis::Curves(curves(&build, &trace, &[1])?),
        };
        Ok(Self { config: config.clone(), build, trace, analysis })
    }

    pub fn fit_records(&self) -> Vec<FitRecord> {
        match &self.analysis {
            Analysis::Nil(n) => ["A", "B", "C"].iter().zip(&n.fits).map(|(s, f)| f.record(*s)).collect(),
            Analysis::Gowdy(g) => vec![
                g.fits[0].record("R"),
                g.fits[1].record("Rc_y"),
                g.pde_fits[0].record("R_pde"),
                g.pde_fits[1].record("Rc_y_pde"),
            ],
            Analysis::Curves(_) => Vec::new(),
        }
    }

    /// Min and max integral-curve lengths along `axis` at the last record.
    pub fn final_curve(&self, axis: usize) -> Option<(f64, f64)> {
        match &self.analysis {
            Analysis::Curves(rows) => rows.iter().rev().find(|r| r.axis == axis).map(|r| (r.min, r.max)),
            _ => None,
        }
    }

    /// One table row: column names and values.
    pub fn table_row(&self) -> (Vec<String>, Vec<f64>) {
        let names = self.axis_names();
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        let mut put = |c: String, v: f64| {
            cols.push(c);
            vals.push(v);
        };
        match &self.analysis {
            Analysis::Nil(n) => {
                for (s, f) in ["A", "B", "C"].iter().zip(&n.fits) {
                    put(format!("{s}_a"), f.a());
                    put(format!("{s}_b"), f.b());
                }
                put("min_r_squared".into(), n.fits.iter().map(|f| f.r_squared).fold(1.0, f64::min));
            }
            Analysis::Gowdy(g) => {
                put("R_rate".into(), g.fits[0].rate());
                put("Rc_rate".into(), g.fits[1].rate());
                put("R_r_squared".into(), g.fits[0].r_squared);
                put("Rc_r_squared".into(), g.fits[1].r_squared);
                for (t, e) in &g.errors {
                    put(format!("error_pct_t{t}"), *e);
                }
            }
            Analysis::Curves(rows) => {
                let t_end = rows.last().map_or(0.0, |r| r.t);
                for r in rows.iter().filter(|r| r.t == t_end) {
                    put(format!("{}_min", names[r.axis]), r.min);
                    put(format!("{}_max", names[r.axis]), r.max);
                }
            }
        }
        (cols, vals)
    }

    /// Writes every artifact of the run into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let file = |name: &str| -> Result<BufWriter<File>> {
            let p = dir.join(name);
            Ok(BufWriter::new(File::create(&p).with_context(|| format!("creating {}", p.display()))?))
        };

        let mesh = MeshFile {
            label: self.config.label(),
            config: &self.config,
            manifold: &self.build.kind,
            block: self.build.block,
            extents: self.build.extents,
            copies: self.build.copies,
            geodesic_fallbacks: self.build.geodesic_fallbacks,
            mesh: self.build.complex.mesh_dump(),
        };
        let mut w = file("mesh.json")?;
        serde_json::to_writer_pretty(&mut w, &mesh)?;
        writeln!(w)?;
        w.flush()?;

        let mut w = file("lengths.csv")?;
        self.build.write_lengths_csv(&mut w)?;
        w.flush()?;
        let mut w = file("trace.csv")?;
        self.trace.write_lengths_csv(&mut w)?;
        w.flush()?;
        let mut w = file("summary.csv")?;
        self.trace.write_summary_csv(&mut w)?;
        w.flush()?;
        if let Some(last) = self.trace.last() {
            let mut w = file("edges_final.csv")?;
            last.report.write_edge_csv(&self.build.complex, &mut w)?;
            w.flush()?;
        }

        let mut w = file("fits.json")?;
        serde_json::to_writer_pretty(&mut w, &self.fit_records())?;
        writeln!(w)?;
        w.flush()?;

        match &self.analysis {
            Analysis::Nil(n) => {
                let mut c = csv::Writer::from_writer(file("oracle.csv")?);
                c.write_record(["t", "A", "B", "C", "A_exact", "B_exact", "C_exact"])?;
                for ((t, pf), ex) in n.series.iter().zip(&n.exact) {
                    let mut row = vec![sig17(*t)];
                    row.extend(pf.as_array().iter().chain(ex.as_array().iter()).map(|x| sig17(*x)));
                    c.write_record(&row)?;
                }
                c.flush()?;
            }
            Analysis::Gowdy(g) => {
                let mut c = csv::Writer::from_writer(file("oracle.csv")?);
                c.write_record(["t", "R", "Rc_y", "R_pde", "Rc_y_pde"])?;
                for (a, b) in g.probe.iter().zip(&g.pde_probe) {
                    c.write_record([a.0, a.1, a.2, b.1, b.2].map(sig17))?;
                }
                c.flush()?;
                let mut c = csv::Writer::from_writer(file("errors.csv")?);
                c.write_record(["t", "error_pct"])?;
                for (t, e) in &g.errors {
                    c.write_record([*t, *e].map(sig17))?;
                }
                c.flush()?;
            }
            Analysis::Curves(rows) => {
                let mut c = csv::Writer::from_writer(file("curves.csv")?);
                c.write_record(["t", "axis", "min", "max"])?;
                for r in rows {
                    c.write_record([sig17(r.t), self.axis_names()[r.axis].to_string(), sig17(r.min), sig17(r.max)])?;
                }
                c.flush()?;
            }
        }

        let (cols, vals) = self.table_row();
        let mut c = csv::Writer::from_writer(file("row.csv")?);
        c.write_record(std::iter::once("label".to_string()).chain(cols))?;
        c.write_record(std::iter::once(self.config.label()).chain(vals.into_iter().map(sig17)))?;
        c.flush()?;
        Ok(())
    }
}

#[derive(Serialize)]
struct MeshFile<'a> {
    label: String,
    config: &'a ExperimentConfig,
    manifold: &'a ricci_mesh::manifolds::ManifoldKind,
    block: ricci_mesh::BlockKind,
    extents: [f64; 3],
    copies: [usize; 3],
    geodesic_fallbacks: usize,
    mesh: ricci_mesh::complex::MeshDump,
}

fn check_invariants(trace: &FlowTrace) -> Result<()> {
    for r in &trace.records {
        let regge = r.report.regge_residual();
        if !(regge <= INVARIANT_TOL) {
            bail!("Regge identity off by {regge:e} at t = {}", r.t);
        }
        let dual: f64 = r.report.vertex_volumes.iter().sum();
        let rel = (dual - r.report.total_volume).abs() / r.report.total_volume;
        if !(rel <= INVARIANT_TOL) {
            bail!("vertex volumes miss the total volume by {rel:e} at t = {}", r.t);
        }
    }
    Ok(())
}

fn nil_analysis(config: &ExperimentConfig, build: &ManifoldBuild, trace: &FlowTrace) -> Result<NilAnalysis> {
    let series = nil_abc_series(build, trace)?;
    let exact = series
        .iter()
        .map(|(t, _)| nil_analytic(*t, config.lambda, config.normalized))
        .collect::<ricci_mesh::Result<Vec<_>>>()?;
    let t: Vec<f64> = series.iter().map(|s| s.0).collect();
    let fit = |k: usize| {
        let f: Vec<f64> = series.iter().map(|s| s.1.as_array()[k]).collect();
        fit_power(&t, &f)
    };
    Ok(NilAnalysis { fits: [fit(0)?, fit(1)?, fit(2)?], series, exact })
}

fn gowdy_analysis(build: &ManifoldBuild, trace: &FlowTrace) -> Result<GowdyAnalysis> {
    let probe = ThetaProbe::find(&build.complex, GOWDY_THETA)?.series(trace);
    let times = trace.times();
    let pde = gowdy_pde_solve(GOWDY_PDE_POINTS, default_pde_step(GOWDY_PDE_POINTS), &times)?;
    let pde_probe: Vec<(f64, f64, f64)> = pde
        .iter()
        .map(|s| {
            let c = GowdyCurvatures::of(s);
            (s.t, c.scalar_at(GOWDY_THETA), c.ricci_at(GOWDY_THETA)[1])
        })
        .collect();
    let fits = |rows: &[(f64, f64, f64)]| -> Result<[FitResult; 2]> {
        let window: Vec<_> = rows.iter().filter(|r| r.0 <= GOWDY_FIT_END + 1e-9).collect();
        let t: Vec<f64> = window.iter().map(|r| r.0).collect();
        let r: Vec<f64> = window.iter().map(|r| r.1).collect();
        let rc: Vec<f64> = window.iter().map(|r| r.2).collect();
        Ok([fit_exponential(&t, &r)?, fit_exponential(&t, &rc)?])
    };
    let table_times: Vec<f64> = [0.0, GOWDY_FIT_END]
        .into_iter()
        .filter(|&t| trace.at_time(t).is_some())
        .collect();
    let errors = rc_error_table(&build.complex, trace, &pde, &table_times)?;
    Ok(GowdyAnalysis { fits: fits(&probe)?, pde_fits: fits(&pde_probe)?, probe, pde_probe, errors })
}

fn curves(build: &ManifoldBuild, trace: &FlowTrace, axes: &[usize]) -> Result<Vec<CurveRow>> {
    let cycles: Vec<(usize, Vec<_>)> = axes
        .iter()
        .map(|&a| (a, aligned_cycles(&build.complex, a)))
        .filter(|(_, c)| !c.is_empty())
        .collect();
    if cycles.is_empty() {
        bail!("no axis-aligned edge cycles along {:?}", axes.iter().map(|&a| AXES[a]).collect::<Vec<_>>());
    }
    let mut rows = Vec::new();
    for r in &trace.records {
        for (axis, cs) in &cycles {
            let scale = build.copies[*axis] as f64;
            let lengths = cs.iter().map(|c| c.length(&r.state) * scale);
            let min = lengths.clone().fold(f64::INFINITY, f64::min);
            let max = lengths.fold(f64::NEG_INFINITY, f64::max);
            rows.push(CurveRow { t: r.t, axis: *axis, min, max });
        }
    }
    Ok(rows)
}
