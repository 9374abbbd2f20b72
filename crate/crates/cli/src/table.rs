//! Results tables assembled from the presets.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ricci_mesh::numfmt::sig17;

use crate::config::{presets, ExperimentConfig, Manifold};
use crate::experiment::Experiment;

/// Presets behind table `number` (tables 2 and 3 share the Gowdy runs).
pub fn table_presets(number: u8) -> Result<Vec<ExperimentConfig>> {
    let family = match number {
        1 => Manifold::Nil,
        2 | 3 => Manifold::Gowdy,
        4 => Manifold::Torus4,
        5 => Manifold::Perturbed,
        _ => bail!("tables are numbered 1 to 5, got {number}"),
    };
    Ok(presets().into_iter().filter(|p| p.manifold == family).collect())
}

/// Runs the presets of one table and writes `table<number>.csv` into `dir`.
pub fn write_table(number: u8, dir: &Path) -> Result<PathBuf> {
    let mut header: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for config in table_presets(number)? {
        let exp = Experiment::run(&config)?;
        let (cols, vals) = exp.table_row();
        let mut row = vec![config.label()];
        // rows can lack a column (no aligned cycle, shorter runs); pad by header
        match &header {
            None => header = Some(cols.clone()),
            Some(h) if *h != cols => {
                let filled = h.iter().map(|c| match cols.iter().position(|x| x == c) {
                    Some(i) => sig17(vals[i]),
                    None => String::new(),
                });
                row.extend(filled);
                rows.push(row);
                continue;
            }
            Some(_) => {}
        }
        row.extend(vals.into_iter().map(sig17));
        rows.push(row);
    }
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(format!("table{number}.csv"));
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(std::iter::once("label".to_string()).chain(header.unwrap_or_default()))?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(path)
}
