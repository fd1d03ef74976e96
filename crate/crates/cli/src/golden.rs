//! Golden-data regression suite. Each `<name>.toml` in the golden directory
//! names a command and a scenario; its outputs are stored next to it as
//! `<name>.csv` (or `<name>.<protocol>.csv` for the quench command).

use std::path::{Path, PathBuf};

use crate::error::CliError;
use crate::scenario::{resolve, ConfigFile, Overrides};
use crate::table::Table;
use crate::{produce, Command};

pub const REL_TOL: f64 = 1e-8;
/// Floor for entries that are zero up to round-off.
pub const ABS_TOL: f64 = 1e-12;

pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden")
}

/// Largest violation ratio `|a − e| / (REL_TOL·|e| + ABS_TOL)`; a value
/// above one is a mismatch.
pub fn compare(expected: &Table, actual: &Table) -> Result<f64, String> {
    if expected.columns != actual.columns {
        return Err(format!(
            "columns {:?} != {:?}",
            actual.columns, expected.columns
        ));
    }
    if expected.rows.len() != actual.rows.len() {
        return Err(format!(
            "{} rows, expected {}",
            actual.rows.len(),
            expected.rows.len()
        ));
    }
    let mut worst = 0.0f64;
    for (e, a) in expected
        .rows
        .iter()
        .flatten()
        .zip(actual.rows.iter().flatten())
    {
        worst = worst.max((a - e).abs() / (REL_TOL * e.abs() + ABS_TOL));
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseReport {
    pub file: String,
    pub worst: f64,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.worst <= 1.0
    }
}

fn cases(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Config(format!(
            "no golden cases in {}",
            dir.display()
        )));
    }
    Ok(paths)
}

/// Regenerates every case. With `bless` the stored CSVs are rewritten;
/// otherwise they are compared and one report per CSV is returned.
pub fn check(dir: &Path, bless: bool) -> Result<Vec<CaseReport>, CliError> {
    let mut reports = Vec::new();
    for path in cases(dir)? {
        let file = ConfigFile::load(&path)?;
        let command: Command = file
            .command
            .as_deref()
            .ok_or_else(|| CliError::Config(format!("{}: missing 'command'", path.display())))?
            .parse()?;
        let scenario = resolve(Some(&file), &Overrides::default())?;
        let stem = path
            .file_stem()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned();
        for output in produce(command, &scenario)? {
            let name = match output.suffix {
                Some(s) => format!("{stem}.{s}.csv"),
                None => format!("{stem}.csv"),
            };
            let target = dir.join(&name);
            if bless {
                std::fs::write(&target, output.table.to_csv()?).map_err(|e| {
                    CliError::Output(format!("cannot write {}: {e}", target.display()))
                })?;
                reports.push(CaseReport {
                    file: name,
                    worst: 0.0,
                });
                continue;
            }
            let text = std::fs::read_to_string(&target)
                .map_err(|e| CliError::Golden(format!("{name}: cannot read stored data: {e}")))?;
            let expected = Table::from_csv(&text)?;
            // compare against the printed precision of a fresh emission
            let actual = Table::from_csv(&output.table.to_csv()?)?;
            let worst = compare(&expected, &actual)
                .map_err(|m| CliError::Golden(format!("{name}: {m}")))?;
            reports.push(CaseReport { file: name, worst });
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: Vec<Vec<f64>>) -> Table {
        Table {
            columns: vec!["a".into(), "b".into()],
            rows,
        }
    }

    #[test]
    fn tolerance_is_relative_with_floor() {
        let e = table(vec![vec![1.0, 0.0]]);
        assert!(compare(&e, &table(vec![vec![1.0 + 5e-9, 5e-13]])).unwrap() <= 1.0);
        assert!(compare(&e, &table(vec![vec![1.0 + 2e-8, 0.0]])).unwrap() > 1.0);
        assert!(compare(&e, &table(vec![vec![1.0, 1e-11]])).unwrap() > 1.0);
        assert!(compare(&e, &table(vec![])).is_err());
    }
}
