//! Identity files: one identity per line,
//!
//! ```text
//! # comment
//! name ; vars=h,a cocycles=X slots=3 ; lhs ; rhs
//! ```
//!
//! `vars` fixes the argument order, `cocycles` lists the names the two sides
//! may use and `slots` (optional) the tensor power both sides must have.

use super::parse::{parse_at, Declarations};
use super::{ParseError, SweedlerExpr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityLine {
    pub name: String,
    /// One-based line number in the file.
    pub line: usize,
    pub declarations: Declarations,
    pub lhs: SweedlerExpr,
    pub rhs: SweedlerExpr,
}

pub fn parse_identity_file(text: &str) -> Result<Vec<IdentityLine>, ParseError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        // (text, one-based column of its first character)
        let mut fields: Vec<(&str, usize)> = Vec::new();
        let mut start = 0;
        for (i, c) in raw.char_indices() {
            if c == ';' {
                fields.push((&raw[start..i], raw[..start].chars().count() + 1));
                start = i + 1;
            }
        }
        fields.push((&raw[start..], raw[..start].chars().count() + 1));
        if fields.len() != 4 {
            return Err(ParseError {
                line,
                column: 1,
                message: format!("expected `name ; declarations ; lhs ; rhs`, found {} fields", fields.len()),
            });
        }
        let name = fields[0].0.trim();
        if name.is_empty() {
            return Err(ParseError { line, column: 1, message: "identity has no name".into() });
        }
        let (declarations, slots) = parse_declarations(fields[1].0, line, fields[1].1)?;
        let lhs = parse_at(fields[2].0, Some(&declarations), line, fields[2].1)?;
        let rhs = parse_at(fields[3].0, Some(&declarations), line, fields[3].1)?;
        for (side, (text, col)) in [(&lhs, fields[2]), (&rhs, fields[3])] {
            if let Some(k) = slots {
                if side.slot_count() != k {
                    return Err(ParseError {
                        line,
                        column: col + (text.len() - text.trim_start().len()),
                        message: format!("expected {k} tensor slots, found {}", side.slot_count()),
                    });
                }
            }
        }
        if lhs.slot_count() != rhs.slot_count() {
            return Err(ParseError {
                line,
                column: fields[3].1,
                message: format!("sides have {} and {} tensor slots", lhs.slot_count(), rhs.slot_count()),
            });
        }
        out.push(IdentityLine { name: name.to_string(), line, declarations, lhs, rhs });
    }
    Ok(out)
}

fn parse_declarations(text: &str, line: usize, column: usize) -> Result<(Declarations, Option<usize>), ParseError> {
    let mut decl = Declarations::default();
    let mut slots = None;
    let mut offset = 0;
    for word in text.split_whitespace() {
        let at = column + text[offset..].find(word).map_or(0, |p| text[..offset + p].chars().count());
        offset = text[offset..].find(word).map_or(offset, |p| offset + p + word.len());
        let err = |message: String| ParseError { line, column: at, message };
        let (key, value) = word.split_once('=').ok_or_else(|| err(format!("expected `key=value`, found `{word}`")))?;
        let items: Vec<String> = value.split(',').filter(|s| !s.is_empty()).map(str::to_string).collect();
        match key {
            "vars" => {
                if let Some(bad) = items.iter().find(|v| !v.chars().all(|c| c.is_ascii_lowercase() || c == '_')) {
                    return Err(err(format!("variable names are lowercase, found `{bad}`")));
                }
                decl.variables = items;
            }
            "cocycles" => {
                if let Some(bad) =
                    items.iter().find(|v| v.as_str() == "S" || !v.chars().all(|c| c.is_ascii_uppercase() || c == '_'))
                {
                    return Err(err(format!("cocycle names are uppercase and not `S`, found `{bad}`")));
                }
                decl.cocycles = items;
            }
            "slots" => {
                slots = Some(value.parse().map_err(|_| err(format!("`slots` needs a number, found `{value}`")))?);
            }
            other => return Err(err(format!("unknown declaration `{other}`"))),
        }
    }
    Ok((decl, slots))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_lines_and_skips_comments() {
        let text = "# header\n\ncoassoc ; vars=h ; h1 (x) h2 (x) h3 ; h1 (x) h2 (x) h3\npsi ; vars=h cocycles=X slots=2 ; h1 X1 S(h4) Xi1 (x) h2 X2 S(h3) Xi2 ; h1 S(h4) (x) h2 S(h3)\n";
        let ids = parse_identity_file(text).unwrap();
        assert_eq!(ids.len(), 2);
        assert_eq!(ids[0].name, "coassoc");
        assert_eq!(ids[0].line, 3);
        assert_eq!(ids[1].declarations.cocycles, vec!["X"]);
    }

    #[test]
    fn errors_point_into_the_file() {
        let err = parse_identity_file("a ; vars=h ; h1 h3 ; h1").unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.column, 17);
        assert!(err.message.contains("non-contiguous"));

        let err = parse_identity_file("\nb ; vars=h ; h1 Y1 ; h1").unwrap_err();
        assert_eq!((err.line, err.column), (2, 17));
        assert!(err.message.contains("undeclared cocycle"));

        let err = parse_identity_file("c ; vars=h slots=2 ; h1 ; h1").unwrap_err();
        assert!(err.message.contains("expected 2 tensor slots"));
        assert!(parse_identity_file("d ; vars=h ; h1").is_err());
        assert!(parse_identity_file("e ; colour=red ; h1 ; h1").unwrap_err().message.contains("unknown declaration"));
        assert!(parse_identity_file("f ; vars=h ; h1 (x) h2 ; h1").unwrap_err().message.contains("tensor slots"));
    }
}
