//! The `ATSP/1` text format: a header line `ATSP 1 <n>` followed by `n`
//! rows of `n` whitespace-separated decimal costs. Blank lines and lines
//! starting with `#` are ignored.

use std::fmt::Write as _;

use super::{AtspError, AtspInstance};
use crate::numeric::Cost;

pub fn parse_atsp(text: &str) -> Result<AtspInstance, AtspError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(AtspError::Parse {
        line: 0,
        msg: "empty input".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let n: usize = match fields.as_slice() {
        ["ATSP", "1", n] => n.parse().map_err(|_| AtspError::Parse {
            line: hline,
            msg: format!("bad vertex count `{n}`"),
        })?,
        _ => {
            return Err(AtspError::Parse {
                line: hline,
                msg: "expected header `ATSP 1 <n>`".into(),
            })
        }
    };
    let mut cost = Vec::with_capacity(n);
    for (line, row) in lines.by_ref().take(n) {
        let parsed: Vec<Cost> = row
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()?;
        if parsed.len() != n {
            return Err(AtspError::Parse {
                line,
                msg: format!("expected {n} costs, found {}", parsed.len()),
            });
        }
        cost.push(parsed);
    }
    if cost.len() != n {
        return Err(AtspError::Parse {
            line: 0,
            msg: format!("expected {n} rows, found {}", cost.len()),
        });
    }
    if let Some((line, _)) = lines.next() {
        return Err(AtspError::Parse {
            line,
            msg: "trailing content after the matrix".into(),
        });
    }
    AtspInstance::new(cost)
}

pub fn write_atsp(inst: &AtspInstance) -> String {
    let mut out = format!("ATSP 1 {}\n", inst.n());
    for row in inst.matrix() {
        let cells: Vec<String> = row.iter().map(Cost::to_string).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}
