use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{EdgeLengthState, FlowConfig};
use crate::curvature::CurvatureReport;
use crate::error::Error;
use crate::numfmt::sig17;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowRecord {
    pub step: usize,
    pub t: f64,
    pub state: EdgeLengthState,
    pub report: CurvatureReport,
}

#[derive(Debug, Clone)]
pub struct FlowTrace {
    pub config: FlowConfig,
    pub records: Vec<FlowRecord>,
    /// Set when the run stopped early.
    pub error: Option<Error>,
}

impl FlowTrace {
    pub(super) fn new(config: FlowConfig) -> Self {
        Self { config, records: Vec::new(), error: None }
    }

    pub(super) fn push(&mut self, step: usize, t: f64, state: EdgeLengthState, report: CurvatureReport) {
        self.records.push(FlowRecord { step, t, state, report });
    }

    pub fn is_complete(&self) -> bool {
        self.error.is_none()
    }

    pub fn into_result(self) -> Result<Self, Error> {
        match self.error.clone() {
            Some(e) => Err(e),
            None => Ok(self),
        }
    }

    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn last(&self) -> Option<&FlowRecord> {
        self.records.last()
    }

    /// Record at flow time `t` (to within a hundredth of a step).
    pub fn at_time(&self, t: f64) -> Option<&FlowRecord> {
        self.records.iter().find(|r| (r.t - t).abs() <= 0.01 * self.config.dt)
    }

    pub fn write_lengths_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "step,t,edge_id,length")?;
        for r in &self.records {
            for (e, l) in r.state.lengths().iter().enumerate() {
                writeln!(w, "{},{},{e},{}", r.step, sig17(r.t), sig17(*l))?;
            }
        }
        Ok(())
    }

    pub fn write_summary_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "step,t,V_S,R_tilde,mean_abs_Rc,mean_abs_deficit")?;
        for r in &self.records {
            let (rc, eps) = r.report.weighted_means();
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.step,
                sig17(r.t),
                sig17(r.report.total_volume),
                sig17(r.report.global_scalar),
                sig17(rc),
                sig17(eps)
            )?;
        }
        Ok(())
    }
}
