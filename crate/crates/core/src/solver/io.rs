use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::json;

use super::grid::GridField;
use crate::Result;

/// Full-precision decimal (17 significant digits).
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row per cell: index, x, [y,] u.
pub fn snapshot_csv(u: &GridField) -> String {
    let mut out = String::new();
    let [nx, ny] = u.n();
    out.push_str(if u.dim() == 1 { "index,x,u\n" } else { "index,x,y,u\n" });
    for j in 0..ny {
        for i in 0..nx {
            let c = u.center(i, j);
            let k = u.idx(i, j);
            if u.dim() == 1 {
                out.push_str(&format!("{k},{},{}\n", fmt17(c[0]), fmt17(u.get(i, j))));
            } else {
                out.push_str(&format!("{k},{},{},{}\n", fmt17(c[0]), fmt17(c[1]), fmt17(u.get(i, j))));
            }
        }
    }
    out
}

pub fn snapshot_metadata(u: &GridField) -> serde_json::Value {
    let d = u.dim();
    json!({
        "t": u.time(),
        "dim": d,
        "dx": &u.dx()[..d],
        "n_cells": &u.n()[..d],
        "domain": { "lo": &u.lo()[..d], "hi": &u.hi()[..d] },
    })
}

/// Writes `<stem>.csv` and `<stem>.json` into `dir`.
pub fn write_snapshot(u: &GridField, dir: &Path, stem: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::File::create(dir.join(format!("{stem}.csv")))?.write_all(snapshot_csv(u).as_bytes())?;
    let meta = serde_json::to_string_pretty(&snapshot_metadata(u))?;
    fs::write(dir.join(format!("{stem}.json")), meta)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{init_grid, Datum, Domain};

    #[test]
    fn csv_has_one_row_per_cell() {
        let u = init_grid(&Domain::new(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), &[16, 20], &Datum::box_2d([0.2, 0.2], [0.6, 0.5], 2.0)).unwrap();
        let csv = snapshot_csv(&u);
        assert_eq!(csv.lines().count(), 1 + 16 * 20);
        assert!(csv.starts_with("index,x,y,u\n0,"));
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
    }
}
