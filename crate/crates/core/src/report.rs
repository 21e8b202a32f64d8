//! Plain-text CSV emission shared by the sample and curve types.

use std::io::{self, Write};

/// 17 significant digits, "." separator.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes each line of `text` as a `# `-prefixed header line.
pub fn write_comment_block<W: Write>(w: &mut W, text: &str) -> io::Result<()> {
    for line in text.lines() {
        if line.is_empty() {
            writeln!(w, "#")?;
        } else {
            writeln!(w, "# {line}")?;
        }
    }
    Ok(())
}

pub fn write_row<W: Write>(w: &mut W, values: &[f64]) -> io::Result<()> {
    let cells: Vec<String> = values.iter().map(|&v| num(v)).collect();
    writeln!(w, "{}", cells.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, 0.0] {
            let s = num(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn comment_block() {
        let mut buf = Vec::new();
        write_comment_block(&mut buf, "a = 1\n\nb = 2").unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# a = 1\n#\n# b = 2\n");
    }
}
