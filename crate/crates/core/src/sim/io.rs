use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{Direction, TrajectoryEnsemble};
use crate::error::Result;

pub const CSV_HEADER: [&str; 10] = ["t", "run", "xA", "pA", "xB", "pB", "dir_xA", "dir_pA", "dir_xB", "dir_pB"];

/// One `(t, run)` record of a trajectory CSV.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub run: usize,
    #[serde(rename = "xA")]
    pub x_a: f64,
    #[serde(rename = "pA")]
    pub p_a: f64,
    #[serde(rename = "xB")]
    pub x_b: f64,
    #[serde(rename = "pB")]
    pub p_b: f64,
    #[serde(rename = "dir_xA")]
    pub dir_x_a: Direction,
    #[serde(rename = "dir_pA")]
    pub dir_p_a: Direction,
    #[serde(rename = "dir_xB")]
    pub dir_x_b: Direction,
    #[serde(rename = "dir_pB")]
    pub dir_p_b: Direction,
}

fn num(v: f64) -> String {
    format!("{v:.8e}")
}

/// Writes one row per `(t, run)`, ordered by time then run, floats to 9 significant digits.
pub fn write_trajectory_csv<W: Write>(e: &TrajectoryEnsemble, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let dirs = e.directions.map(|d| d.as_str());
    for (i, &t) in e.times.iter().enumerate() {
        let t = num(t);
        for (run, path) in e.paths.iter().enumerate() {
            let p = &path[i];
            let run = run.to_string();
            w.write_record([
                t.as_str(),
                run.as_str(),
                &num(p.x_a),
                &num(p.p_a),
                &num(p.x_b),
                &num(p.p_b),
                dirs[0],
                dirs[1],
                dirs[2],
                dirs[3],
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_trajectory_csv<R: Read>(input: R) -> Result<Vec<TrajectoryRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(crate::Error::Io(format!("unexpected trajectory CSV header: {}", header.iter().collect::<Vec<_>>().join(","))));
    }
    Ok(r.deserialize().collect::<std::result::Result<Vec<TrajectoryRow>, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::SqueezeParams;
    use crate::sim::{simulate, simulate_superposition, Setting, SimConfig, SuperpositionConfig, Variable};

    fn csv_of(e: &TrajectoryEnsemble) -> Vec<u8> {
        let mut buf = Vec::new();
        write_trajectory_csv(e, &mut buf).unwrap();
        buf
    }

    #[test]
    fn round_trip_preserves_nine_digits() {
        let mut c = SimConfig::new(SqueezeParams::new(1.0).unwrap(), 1.0, 1.0, 5, 9, Setting::XP).unwrap();
        c.record_stride = 20;
        let e = simulate(&c).unwrap();
        let rows = read_trajectory_csv(csv_of(&e).as_slice()).unwrap();
        assert_eq!(rows.len(), e.times.len() * 5);
        for row in &rows {
            let i = e.time_index(row.t).unwrap();
            let pt = &e.paths[row.run][i];
            for (got, want) in [(row.x_a, pt.x_a), (row.p_a, pt.p_a), (row.x_b, pt.x_b), (row.p_b, pt.p_b)] {
                assert!((got - want).abs() <= 1e-8 * want.abs().max(1e-300));
            }
            assert_eq!(row.dir_x_a, e.direction(Variable::XA));
            assert_eq!(row.dir_p_b, Direction::Backward);
        }
        assert!(rows.windows(2).all(|w| (w[0].t, w[0].run) < (w[1].t, w[1].run)));
    }

    #[test]
    fn identical_config_gives_identical_bytes() {
        let mut c = SimConfig::new(SqueezeParams::new(2.0).unwrap(), 1.0, 2.0, 8, 7, Setting::XX).unwrap();
        c.record_stride = 40;
        assert_eq!(csv_of(&simulate(&c).unwrap()), csv_of(&simulate(&c).unwrap()));
    }

    #[test]
    fn single_mode_rows() {
        let mut c = SuperpositionConfig::new(1.0, -1.0, 1.0, 1.0, 3, 2).unwrap();
        c.record_stride = 100;
        let text = String::from_utf8(csv_of(&simulate_superposition(&c).unwrap())).unwrap();
        let first = text.lines().nth(1).unwrap();
        assert!(first.starts_with("0.00000000e0,0,"));
        assert!(first.ends_with("0.00000000e0,0.00000000e0,backward,forward,none,none"));
    }

    #[test]
    fn header_is_checked() {
        assert!(read_trajectory_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
