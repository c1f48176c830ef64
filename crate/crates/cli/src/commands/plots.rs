use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Component, Path, PathBuf};

use crate::commands::rate_study::CSV_HEADER;
use crate::error::{CliError, CliResult};

pub const DEFAULT_GAMMA: f64 = 0.5;

/// `(N, error)` pairs keyed by order, read from a rate-study CSV. The header
/// must match exactly and every record must parse.
pub fn read_rate_csv(path: &Path) -> CliResult<BTreeMap<u32, Vec<(usize, f64)>>> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes.as_slice());
    let header = reader.headers().map_err(|e| CliError::Config(format!("malformed csv: {e}")))?.clone();
    if header.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(CliError::Config(format!("expected header {}, got {:?}", CSV_HEADER.join(","), header)));
    }
    let mut by_order: BTreeMap<u32, Vec<(usize, f64)>> = BTreeMap::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Config(format!("malformed csv: {e}")))?;
        let bad = || CliError::Config(format!("malformed csv record {}: {:?}", i + 2, rec));
        let n: usize = rec[0].parse().map_err(|_| bad())?;
        let order: u32 = rec[1].parse().map_err(|_| bad())?;
        let error: f64 = rec[2].parse().map_err(|_| bad())?;
        let _: f64 = rec[3].parse().map_err(|_| bad())?;
        by_order.entry(order).or_default().push((n, error));
    }
    if by_order.is_empty() {
        return Err(CliError::Config(format!("{} has no data rows", path.display())));
    }
    Ok(by_order)
}

fn absolute(p: &Path) -> CliResult<PathBuf> {
    let p = if p.is_absolute() { p.to_path_buf() } else { std::env::current_dir()?.join(p) };
    let mut out = PathBuf::new();
    for c in p.components() {
        match c {
            Component::CurDir => {}
            Component::ParentDir => {
                out.pop();
            }
            other => out.push(other),
        }
    }
    Ok(out)
}

/// `target` as seen from the directory `from`.
pub fn relative_path(target: &Path, from: &Path) -> CliResult<PathBuf> {
    let (t, f) = (absolute(target)?, absolute(from)?);
    let (tc, fc): (Vec<_>, Vec<_>) = (t.components().collect(), f.components().collect());
    let common = tc.iter().zip(&fc).take_while(|(a, b)| a == b).count();
    let mut out = PathBuf::new();
    for _ in common..fc.len() {
        out.push("..");
    }
    for c in &tc[common..] {
        out.push(c);
    }
    Ok(out)
}

fn quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', "''"))
}

/// A gnuplot script with one multiplot block per order: error against `N`
/// on log-log axes, and log error against `N^gamma`.
pub fn gnuplot_script(csv_ref: &str, orders: &[u32], gamma: f64, title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# rate-study plots; run `gnuplot -p` on this file from its own directory");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "data = {}", quote(csv_ref));
    let _ = writeln!(s, "gamma = {gamma:?}");
    let _ = writeln!(s, "set key top right");
    for &order in orders {
        let sel = format!("($2 == {order} ? $1 : 1/0)");
        let _ = writeln!(s);
        let _ = writeln!(s, "# order {order}");
        let _ = writeln!(s, "set multiplot layout 1,2 title {}", quote(&format!("{title}, order {order}")));
        let _ = writeln!(s, "set logscale xy");
        let _ = writeln!(s, "set xlabel 'N'");
        let _ = writeln!(s, "set ylabel 'error'");
        let _ = writeln!(s, "plot data skip 1 using {sel}:3 with linespoints title 'error vs N'");
        let _ = writeln!(s, "unset logscale x");
        let _ = writeln!(s, "set xlabel 'N^gamma'");
        let _ = writeln!(s, "plot data skip 1 using ($2 == {order} ? $1**gamma : 1/0):3 with linespoints title 'error vs N^gamma'");
        let _ = writeln!(s, "unset logscale xy");
        let _ = writeln!(s, "unset multiplot");
    }
    s
}

/// Reads `csv`, writes the script next to it (or to `output`) and returns
/// the script path.
pub fn run(csv: &Path, output: Option<&Path>, gamma: Option<f64>) -> CliResult<PathBuf> {
    let gamma = gamma.unwrap_or(DEFAULT_GAMMA);
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(CliError::Config(format!("gamma must be positive, got {gamma}")));
    }
    let data = read_rate_csv(csv)?;
    let script = output.map(Path::to_path_buf).unwrap_or_else(|| {
        let mut p = csv.as_os_str().to_owned();
        p.push(".gp");
        PathBuf::from(p)
    });
    let dir = absolute(&script)?.parent().map(Path::to_path_buf).unwrap_or_default();
    let csv_ref = relative_path(csv, &dir)?;
    let title = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let orders: Vec<u32> = data.keys().copied().collect();
    let text = gnuplot_script(&csv_ref.to_string_lossy(), &orders, gamma, &title);
    crate::output::write_file(&script, text.as_bytes())?;
    Ok(script)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_paths() {
        let r = relative_path(Path::new("/a/b/c.csv"), Path::new("/a/d")).unwrap();
        assert_eq!(r, PathBuf::from("../b/c.csv"));
        let r = relative_path(Path::new("/a/b/c.csv"), Path::new("/a/b")).unwrap();
        assert_eq!(r, PathBuf::from("c.csv"));
    }

    #[test]
    fn one_block_per_order() {
        let s = gnuplot_script("x.csv", &[0, 1, 2], 0.5, "t");
        assert_eq!(s.matches("set multiplot layout").count(), 3);
        assert!(s.contains("data = 'x.csv'"));
    }
}
