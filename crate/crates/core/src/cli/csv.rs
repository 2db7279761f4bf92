use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::sim::{AggregateCurve, RegretTrace};

pub const CURVE_HEADER: &str = "policy,graph,t,mean_cum_regret,std_cum_regret,trials";
pub const RAW_HEADER: &str = "policy,graph,trial,t,cum_regret";

/// Floats with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Graph specs contain commas, so that column is quoted when needed.
fn field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_curve<W: Write + ?Sized>(
    w: &mut W,
    policy: &str,
    graph: &str,
    curve: &AggregateCurve,
) -> io::Result<()> {
    let (policy, graph) = (field(policy), field(graph));
    for (i, (m, s)) in curve.mean.iter().zip(&curve.std).enumerate() {
        writeln!(
            w,
            "{policy},{graph},{},{},{},{}",
            i + 1,
            fmt_float(*m),
            fmt_float(*s),
            curve.trials
        )?;
    }
    Ok(())
}

pub fn write_raw<W: Write + ?Sized>(
    w: &mut W,
    policy: &str,
    graph: &str,
    traces: &[RegretTrace],
) -> io::Result<()> {
    let (policy, graph) = (field(policy), field(graph));
    for tr in traces {
        for (i, r) in tr.cum_regret.iter().enumerate() {
            writeln!(
                w,
                "{policy},{graph},{},{},{}",
                tr.trial_id,
                i + 1,
                fmt_float(*r)
            )?;
        }
    }
    Ok(())
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so a failed run never leaves a partial file behind.
pub fn write_atomic<F>(path: &Path, fill: F) -> io::Result<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir)?;
    let tmp = NamedTempFile::new_in(&dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        fill(&mut w)?;
        w.flush()?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// `runs.csv` → `runs.raw.csv`.
pub fn raw_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.raw.csv"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.0, 1.0 / 3.0, 40.123456789012345, 1e-300, 123456.789] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_float(0.0), "0.0000000000000000e0");
    }

    #[test]
    fn curve_rows() {
        let curve = AggregateCurve {
            mean: vec![0.5, 1.0],
            std: vec![0.0, 0.25],
            trials: 4,
        };
        let mut buf = Vec::new();
        write_curve(&mut buf, "ts-n", "cliques:3,2", &curve).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines,
            [
                "ts-n,\"cliques:3,2\",1,5.0000000000000000e-1,0.0000000000000000e0,4",
                "ts-n,\"cliques:3,2\",2,1.0000000000000000e0,2.5000000000000000e-1,4",
            ]
        );
    }

    #[test]
    fn raw_path_keeps_directory() {
        assert_eq!(raw_path(Path::new("out/r.csv")), Path::new("out/r.raw.csv"));
        assert_eq!(raw_path(Path::new("r")), Path::new("r.raw.csv"));
    }

    #[test]
    fn failed_write_leaves_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        let err = write_atomic(&path, |w| {
            w.write_all(b"partial")?;
            Err(io::Error::other("boom"))
        });
        assert!(err.is_err());
        assert!(!path.exists());
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    }
}
