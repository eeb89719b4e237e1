//! Instance, front and schedule files.
//!
//! Instance files are plain text: `#` starts a comment line, the first data
//! line is the job count `n`, then `n` lines of `p q`. Jobs may appear in any
//! order. Fronts are CSV with header `cmax,lmax`; schedules are CSV with
//! header `point_index,job_id,machine`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Front, Instance, ParetoPoint, Schedule};

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut data = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, first) = data.next().ok_or(Error::Parse {
        line: 0,
        message: "missing job count".into(),
    })?;
    let n: usize = first.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected job count, found {first:?}"),
    })?;
    if n == 0 {
        return Err(Error::EmptyInstance);
    }

    let mut raw = Vec::with_capacity(n);
    for (line, text) in data {
        if raw.len() == n {
            return Err(Error::Parse {
                line,
                message: format!("more than {n} job lines"),
            });
        }
        let mut fields = text.split_whitespace();
        let mut next = |what: &str| -> Result<i64> {
            let tok = fields.next().ok_or_else(|| Error::Parse {
                line,
                message: format!("missing {what}"),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line,
                message: format!("invalid {what} {tok:?}"),
            })
        };
        let p = next("processing time")?;
        let q = next("delivery time")?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line,
                message: "expected exactly two integers".into(),
            });
        }
        raw.push((p, q));
    }
    if raw.len() != n {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("expected {n} job lines, found {}", raw.len()),
        });
    }
    Instance::normalize(&raw)
}

/// Canonical text form: jobs in sorted order.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# n={} P={} q_max={}",
        inst.n(),
        inst.total_processing(),
        inst.q_max()
    );
    let _ = writeln!(out, "{}", inst.n());
    for job in inst.jobs() {
        let _ = writeln!(out, "{} {}", job.p, job.q);
    }
    out
}

pub fn write_front<W: std::io::Write>(out: W, front: &Front) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["cmax", "lmax"])?;
    for p in front {
        w.write_record([p.cmax.to_string(), p.lmax.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn front_to_string(front: &Front) -> String {
    let mut buf = Vec::new();
    write_front(&mut buf, front).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Reads a `cmax,lmax` file; rows must be strictly ordered.
pub fn parse_front(text: &str) -> Result<Front> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| Error::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    if headers != vec!["cmax", "lmax"] {
        return Err(Error::Parse {
            line: 1,
            message: "expected header cmax,lmax".into(),
        });
    }
    let mut points = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        let field = |j: usize| -> Result<i64> {
            rec.get(j)
                .and_then(|v| v.trim().parse().ok())
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("invalid row {:?}", rec.iter().collect::<Vec<_>>()),
                })
        };
        points.push(ParetoPoint::new(field(0)?, field(1)?));
    }
    Front::from_sorted(points)
}

/// One row per `(front point, job)`, jobs by ascending original id.
pub fn write_schedules<W: std::io::Write>(out: W, schedules: &[Schedule]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["point_index", "job_id", "machine"])?;
    for (idx, s) in schedules.iter().enumerate() {
        for (j, m) in s.assignment.iter().enumerate() {
            w.write_record([idx.to_string(), (j + 1).to_string(), m.number().to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}
