//! The instance text format.
//!
//! Line oriented; tokens are separated by whitespace, `#` starts a comment
//! and blank lines are ignored.
//!
//! ```text
//! matroid vector gf 3 2       # vector matroid over GF(3) in dimension 2
//!   v 1 0                     # one `v` row per ground element, residues mod p
//!   v 0 1
//! end
//! sequence 0 1 1              # ground element ids, 0-based
//! colors 0 0 1                # one color per sequence entry
//! r 2
//! mode special                # general | special | noncolor
//! ```
//!
//! Matroid headers:
//!
//! | header                          | body                                |
//! |---------------------------------|-------------------------------------|
//! | `vector gf <p> <dim>`           | `v <residue>...`                    |
//! | `vector rational <dim>`         | `v <rational>...`                   |
//! | `affine gf <p> <dim>`           | `v <residue>...` (points)           |
//! | `affine rational <dim>`         | `v <rational>...` (points)          |
//! | `uniform <rank> <size>`         | empty                               |
//! | `graphic <vertices>`            | `e <u> <v>` per edge                |
//! | `direct-sum`                    | two nested `matroid` blocks         |
//!
//! Every block ends with `end`. Rationals are written `a` or `a/b` with
//! arbitrary-precision integers; they are normalized on output. In a direct
//! sum the right summand's ids follow the left summand's. `colors` is
//! required in modes `general` and `special` and optional in `noncolor`.
//!
//! [`emit_instance`] writes the canonical form: comments dropped, nested
//! blocks indented by two spaces, fields in the order above.
//!
//! A partition file lists one part per line as `part <index>...`, first
//! part first; every other line is ignored, so a `solve` report doubles as
//! a partition file.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_rational::BigRational;
use tverberg_core::{ColorId, Coordinates, ElementId, MatroidSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    General,
    Special,
    Noncolor,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::General => "general",
            Mode::Special => "special",
            Mode::Noncolor => "noncolor",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "general" => Ok(Mode::General),
            "special" => Ok(Mode::Special),
            "noncolor" => Ok(Mode::Noncolor),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub matroid: MatroidSpec,
    pub sequence: Vec<ElementId>,
    pub colors: Option<Vec<ColorId>>,
    pub r: usize,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            (!tokens.is_empty()).then_some(Line {
                number: i + 1,
                tokens,
            })
        })
        .collect()
}

fn parse_num<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T, ParseError> {
    token
        .parse()
        .or_else(|_| err(line, format!("invalid {what} `{token}`")))
}

fn parse_rational(line: usize, token: &str) -> Result<BigRational, ParseError> {
    token
        .parse()
        .or_else(|_| err(line, format!("invalid rational `{token}`")))
}

struct Cursor<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self) -> Option<&Line<'a>> {
        let line = self.lines.get(self.pos)?;
        self.pos += 1;
        Some(line)
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(0, |l| l.number)
    }

    fn matroid(&mut self, header: &[&str], line: usize) -> Result<MatroidSpec, ParseError> {
        let spec = match header {
            ["vector" | "affine", field @ ..] => {
                let (dim, coords) = self.coordinates(field, line)?;
                if header[0] == "vector" {
                    MatroidSpec::Vector { dim, coords }
                } else {
                    MatroidSpec::Affine { dim, coords }
                }
            }
            ["uniform", rank, size] => {
                self.expect_end()?;
                MatroidSpec::Uniform {
                    rank: parse_num(line, rank, "rank")?,
                    size: parse_num(line, size, "size")?,
                }
            }
            ["graphic", vertices] => {
                let vertices = parse_num(line, vertices, "vertex count")?;
                let mut edges = Vec::new();
                for row in self.rows("e")? {
                    match row.tokens[1..] {
                        [u, v] => edges.push((parse_num(row.number, u, "vertex")?, parse_num(row.number, v, "vertex")?)),
                        _ => return err(row.number, "an edge needs exactly two endpoints"),
                    }
                }
                MatroidSpec::Graphic { vertices, edges }
            }
            ["direct-sum"] => {
                let left = self.nested(line)?;
                let right = self.nested(line)?;
                self.expect_end()?;
                MatroidSpec::DirectSum(Box::new(left), Box::new(right))
            }
            _ => return err(line, format!("unknown matroid header `{}`", header.join(" "))),
        };
        Ok(spec)
    }

    fn nested(&mut self, parent: usize) -> Result<MatroidSpec, ParseError> {
        let last = self.last_line();
        let Some(line) = self.next() else {
            return err(last, format!("direct sum opened on line {parent} needs two matroid blocks"));
        };
        let number = line.number;
        let tokens = line.tokens.clone();
        match tokens.as_slice() {
            ["matroid", header @ ..] => self.matroid(header, number),
            _ => err(number, "expected a nested `matroid` block"),
        }
    }

    fn coordinates(&mut self, field: &[&str], line: usize) -> Result<(usize, Coordinates), ParseError> {
        match field {
            ["gf", p, dim] => {
                let p: u64 = parse_num(line, p, "prime")?;
                let dim = parse_num(line, dim, "dimension")?;
                let mut rows = Vec::new();
                for row in self.rows("v")? {
                    rows.push(
                        row.tokens[1..]
                            .iter()
                            .map(|t| parse_num(row.number, t, "residue"))
                            .collect::<Result<Vec<u64>, _>>()?,
                    );
                }
                Ok((dim, Coordinates::Prime { p, rows }))
            }
            ["rational", dim] => {
                let dim = parse_num(line, dim, "dimension")?;
                let mut rows = Vec::new();
                for row in self.rows("v")? {
                    rows.push(
                        row.tokens[1..]
                            .iter()
                            .map(|t| parse_rational(row.number, t))
                            .collect::<Result<Vec<_>, _>>()?,
                    );
                }
                Ok((dim, Coordinates::Rational(rows)))
            }
            _ => err(line, "expected `gf <p> <dim>` or `rational <dim>`"),
        }
    }

    /// Rows starting with `tag`, up to and including `end`.
    fn rows(&mut self, tag: &str) -> Result<Vec<Line<'a>>, ParseError> {
        let mut out = Vec::new();
        loop {
            let last = self.last_line();
            let Some(line) = self.next() else {
                return err(last, "unterminated matroid block, expected `end`");
            };
            match line.tokens[0] {
                "end" if line.tokens.len() == 1 => return Ok(out),
                t if t == tag => out.push(Line {
                    number: line.number,
                    tokens: line.tokens.clone(),
                }),
                other => return err(line.number, format!("expected `{tag}` or `end`, found `{other}`")),
            }
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        let last = self.last_line();
        match self.next() {
            Some(line) if line.tokens == ["end"] => Ok(()),
            Some(line) => err(line.number, "expected `end`"),
            None => err(last, "unterminated matroid block, expected `end`"),
        }
    }
}

/// Parses and validates an instance.
pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let mut cur = Cursor {
        lines: lines(text),
        pos: 0,
    };
    let mut matroid: Option<(MatroidSpec, usize)> = None;
    let mut sequence: Option<(Vec<ElementId>, usize)> = None;
    let mut colors: Option<(Vec<ColorId>, usize)> = None;
    let mut r: Option<(usize, usize)> = None;
    let mut mode: Option<Mode> = None;

    while let Some(line) = cur.next() {
        let number = line.number;
        let tokens = line.tokens.clone();
        let (key, rest) = (tokens[0], &tokens[1..]);
        let duplicate = match key {
            "matroid" => matroid.is_some(),
            "sequence" => sequence.is_some(),
            "colors" => colors.is_some(),
            "r" => r.is_some(),
            "mode" => mode.is_some(),
            other => return err(number, format!("unknown field `{other}`")),
        };
        if duplicate {
            return err(number, format!("duplicate field `{key}`"));
        }
        match key {
            "matroid" => matroid = Some((cur.matroid(rest, number)?, number)),
            "sequence" => {
                let ids = rest
                    .iter()
                    .map(|t| parse_num(number, t, "element id").map(ElementId))
                    .collect::<Result<_, _>>()?;
                sequence = Some((ids, number));
            }
            "colors" => {
                let ids = rest
                    .iter()
                    .map(|t| parse_num(number, t, "color").map(ColorId))
                    .collect::<Result<_, _>>()?;
                colors = Some((ids, number));
            }
            "r" => match rest {
                [v] => r = Some((parse_num(number, v, "r")?, number)),
                _ => return err(number, "`r` takes one value"),
            },
            _ => match rest {
                [v] => mode = Some(v.parse().map_err(|m| ParseError { line: number, message: m })?),
                _ => return err(number, "`mode` takes one value"),
            },
        }
    }

    let end = cur.last_line();
    let Some((matroid, matroid_line)) = matroid else {
        return err(end, "missing field `matroid`");
    };
    let Some((sequence, sequence_line)) = sequence else {
        return err(end, "missing field `sequence`");
    };
    let Some((r, r_line)) = r else {
        return err(end, "missing field `r`");
    };
    let Some(mode) = mode else {
        return err(end, "missing field `mode`");
    };
    if r == 0 {
        return err(r_line, "r must be at least 1");
    }
    if let Err(e) = matroid.build() {
        return err(matroid_line, e.to_string());
    }
    let ground = matroid.ground_size();
    if let Some(bad) = sequence.iter().find(|e| e.0 >= ground) {
        return err(sequence_line, format!("element {bad} is outside the ground set of size {ground}"));
    }
    match (&colors, mode) {
        (None, Mode::General | Mode::Special) => {
            return err(end, format!("missing field `colors` (required in mode {mode})"));
        }
        (Some((c, line)), _) if c.len() != sequence.len() => {
            return err(
                *line,
                format!("{} colors for {} sequence entries", c.len(), sequence.len()),
            );
        }
        _ => {}
    }
    Ok(InstanceFile {
        matroid,
        sequence,
        colors: colors.map(|(c, _)| c),
        r,
        mode,
    })
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| format!(" {x}")).collect()
}

fn emit_matroid(out: &mut String, spec: &MatroidSpec, depth: usize) {
    let pad = "  ".repeat(depth);
    let rows = |out: &mut String, coords: &Coordinates| match coords {
        Coordinates::Prime { rows, .. } => {
            for row in rows {
                let _ = writeln!(out, "{pad}  v{}", join(row));
            }
        }
        Coordinates::Rational(rows) => {
            for row in rows {
                let _ = writeln!(out, "{pad}  v{}", join(row));
            }
        }
    };
    let field = |coords: &Coordinates, dim: usize| match coords {
        Coordinates::Prime { p, .. } => format!("gf {p} {dim}"),
        Coordinates::Rational(_) => format!("rational {dim}"),
    };
    match spec {
        MatroidSpec::Vector { dim, coords } => {
            let _ = writeln!(out, "{pad}matroid vector {}", field(coords, *dim));
            rows(out, coords);
        }
        MatroidSpec::Affine { dim, coords } => {
            let _ = writeln!(out, "{pad}matroid affine {}", field(coords, *dim));
            rows(out, coords);
        }
        MatroidSpec::Uniform { rank, size } => {
            let _ = writeln!(out, "{pad}matroid uniform {rank} {size}");
        }
        MatroidSpec::Graphic { vertices, edges } => {
            let _ = writeln!(out, "{pad}matroid graphic {vertices}");
            for (u, v) in edges {
                let _ = writeln!(out, "{pad}  e {u} {v}");
            }
        }
        MatroidSpec::DirectSum(l, r) => {
            let _ = writeln!(out, "{pad}matroid direct-sum");
            emit_matroid(out, l, depth + 1);
            emit_matroid(out, r, depth + 1);
        }
    }
    let _ = writeln!(out, "{pad}end");
}

/// Canonical text of an instance.
pub fn emit_instance(inst: &InstanceFile) -> String {
    let mut out = String::new();
    emit_matroid(&mut out, &inst.matroid, 0);
    let _ = writeln!(out, "sequence{}", join(&inst.sequence));
    if let Some(colors) = &inst.colors {
        let _ = writeln!(out, "colors{}", join(colors));
    }
    let _ = writeln!(out, "r {}", inst.r);
    let _ = writeln!(out, "mode {}", inst.mode);
    out
}

/// Reads `part` lines; everything else is ignored.
pub fn parse_partition(text: &str) -> Result<Vec<Vec<usize>>, ParseError> {
    lines(text)
        .into_iter()
        .filter(|l| l.tokens[0] == "part")
        .map(|l| {
            l.tokens[1..]
                .iter()
                .map(|t| parse_num(l.number, t, "index"))
                .collect()
        })
        .collect()
}

pub fn emit_partition(parts: &[Vec<usize>]) -> String {
    parts.iter().map(|p| format!("part{}\n", join(p))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const GF3: &str = "\
# two parts over GF(3)
matroid vector gf 3 2
  v 1 0
  v 2 0   # parallel to the first
  v 0 1
end
sequence 0 1 2
colors 1 1 2
r 2
mode special
";

    #[test]
    fn parses_example() {
        let inst = parse_instance(GF3).unwrap();
        assert_eq!(inst.r, 2);
        assert_eq!(inst.mode, Mode::Special);
        assert_eq!(inst.sequence, vec![ElementId(0), ElementId(1), ElementId(2)]);
        assert_eq!(inst.matroid.ground_size(), 3);
    }

    #[test]
    fn canonical_text_round_trips() {
        let canonical = emit_instance(&parse_instance(GF3).unwrap());
        assert_eq!(emit_instance(&parse_instance(&canonical).unwrap()), canonical);
        assert!(!canonical.contains('#'));
    }

    #[test]
    fn rationals_are_normalized() {
        let text = "matroid vector rational 2\n  v 2/4 -3/1\nend\nsequence 0\nr 1\nmode noncolor\n";
        let out = emit_instance(&parse_instance(text).unwrap());
        assert!(out.contains("  v 1/2 -3\n"), "{out}");
    }

    #[test]
    fn nested_direct_sum() {
        let text = "\
matroid direct-sum
  matroid uniform 1 2
  end
  matroid graphic 3
    e 0 1
    e 1 2
  end
end
sequence 0 2 3
colors 0 1 2
r 1
mode general
";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.matroid.ground_size(), 4);
        assert_eq!(emit_instance(&inst), text);
    }

    #[test]
    fn missing_colors_in_general_mode() {
        let text = GF3.replace("colors 1 1 2\n", "").replace("special", "general");
        let e = parse_instance(&text).unwrap_err();
        assert!(e.message.contains("colors"), "{e}");
    }

    #[test]
    fn error_lines() {
        let e = parse_instance(&GF3.replace("v 0 1", "v 0 x")).unwrap_err();
        assert_eq!(e.line, 5);
        let e = parse_instance(&GF3.replace("sequence 0 1 2", "sequence 0 1 7")).unwrap_err();
        assert_eq!(e.line, 7);
        let e = parse_instance(&GF3.replace("colors 1 1 2", "colors 1 1")).unwrap_err();
        assert_eq!(e.line, 8);
        let e = parse_instance(&GF3.replace("gf 3", "gf 4")).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("prime"));
        let e = parse_instance(&GF3.replace("r 2", "r 0")).unwrap_err();
        assert_eq!(e.line, 9);
        let e = parse_instance(&GF3.replace("end\n", "")).unwrap_err();
        assert!(e.message.contains("expected `v` or `end`"), "{e}");
        let e = parse_instance(&format!("{GF3}r 3\n")).unwrap_err();
        assert!(e.message.contains("duplicate"));
        assert!(parse_instance("bogus 1\n").is_err());
    }

    #[test]
    fn partitions() {
        let parts = vec![vec![0, 3], vec![], vec![1, 2]];
        let text = format!("outcome partition\n{}oracle_calls 4\n", emit_partition(&parts));
        assert_eq!(parse_partition(&text).unwrap(), parts);
        assert!(parse_partition("part 1 x\n").is_err());
    }
}
