use crate::geometry::Point2;
use crate::{KdcError, Result};

/// Read node-coordinate records (`index x y`, one per line).
///
/// Records follow a `NODE_COORD_SECTION` line when there is one; otherwise
/// leading lines that do not start with a number are taken as the header.
/// `EOF` or the end of input stops reading.
pub fn parse_point_set(text: &str) -> Result<Vec<Point2>> {
    let lines: Vec<&str> = text.lines().collect();
    let start = match lines.iter().position(|l| l.trim().eq_ignore_ascii_case("NODE_COORD_SECTION")) {
        Some(i) => i + 1,
        None => lines
            .iter()
            .position(|l| l.split_whitespace().next().is_some_and(|w| w.parse::<f64>().is_ok()))
            .unwrap_or(lines.len()),
    };
    let mut out = Vec::new();
    for (i, line) in lines.iter().enumerate().skip(start) {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.eq_ignore_ascii_case("EOF") {
            break;
        }
        let err = |msg: String| KdcError::ParseLine { line: i + 1, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(format!("expected `index x y`, got {} fields", fields.len())));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(format!("not a number: {s:?}")))
        };
        num(fields[0])?;
        out.push(Point2::new(num(fields[1])?, num(fields[2])?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records() {
        let text = "NAME : tiny\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3.5 1e2\n3 -1 2\nEOF\n";
        let pts = parse_point_set(text).unwrap();
        assert_eq!(pts, vec![Point2::new(0.0, 0.0), Point2::new(3.5, 100.0), Point2::new(-1.0, 2.0)]);
        assert!(parse_point_set("NODE_COORD_SECTION\nEOF\n").unwrap().is_empty());
        assert!(parse_point_set("").unwrap().is_empty());
        // no section marker
        assert_eq!(parse_point_set("points\n1 1 1\n2 2 2").unwrap().len(), 2);
    }

    #[test]
    fn errors_name_the_line() {
        let e = parse_point_set("NODE_COORD_SECTION\n1 0 0\n2 x 1\n").unwrap_err();
        assert!(matches!(e, KdcError::ParseLine { line: 3, .. }), "{e}");
        assert!(e.to_string().contains("line 3"));
        let e = parse_point_set("NODE_COORD_SECTION\n1 0\n").unwrap_err();
        assert!(matches!(e, KdcError::ParseLine { line: 2, .. }));
    }
}
