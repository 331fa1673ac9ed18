//! Matrix Market and CSV input, Matrix Market array output.

use std::fs;
use std::io::Write;
use std::path::Path;

use randfact_core::DenseMatrix;

use crate::error::{CliError, Result};

/// Reads a dense matrix. Files whose first line is a `%%MatrixMarket`
/// banner are parsed as Matrix Market (array or coordinate); anything else
/// is parsed as CSV.
pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let parsed =
        if text.trim_start().starts_with("%%MatrixMarket") { parse_matrix_market(&text) } else { parse_csv(&text) };
    parsed.map_err(|msg| CliError::Parse(format!("{}: {msg}", path.display())))
}

/// Serializes `a` in Matrix Market array format, column-major, with enough
/// digits to round-trip every entry exactly.
pub fn matrix_market_string(a: &DenseMatrix) -> String {
    let mut out = String::with_capacity(32 + 25 * a.rows() * a.cols());
    out.push_str("%%MatrixMarket matrix array real general\n");
    out.push_str(&format!("{} {}\n", a.rows(), a.cols()));
    for v in a.as_slice() {
        out.push_str(&format!("{v:.17e}\n"));
    }
    out
}

pub fn write_matrix_market(path: &Path, a: &DenseMatrix) -> Result<()> {
    write_atomic(path, matrix_market_string(a).as_bytes())
}

/// Writes through a sibling temporary file and renames it into place, so a
/// reader never observes a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name =
        path.file_name().ok_or_else(|| CliError::Parameter(format!("{}: not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::io(path, e)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
    Skew,
}

fn parse_value(token: &str, line: usize) -> std::result::Result<f64, String> {
    let v: f64 = token.parse().map_err(|_| format!("line {line}: cannot parse '{token}' as a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("line {line}: non-finite value '{token}'"))
    }
}

fn parse_index(token: &str, bound: usize, line: usize) -> std::result::Result<usize, String> {
    match token.parse::<usize>() {
        Ok(i) if (1..=bound).contains(&i) => Ok(i - 1),
        _ => Err(format!("line {line}: index '{token}' outside 1..={bound}")),
    }
}

pub fn parse_matrix_market(text: &str) -> std::result::Result<DenseMatrix, String> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, banner) = lines.next().ok_or("empty file")?;
    let fields: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(format!("line 1: malformed banner '{banner}'"));
    }
    let coordinate = match fields[2].as_str() {
        "array" => false,
        "coordinate" => true,
        other => return Err(format!("line 1: unsupported format '{other}'")),
    };
    if !matches!(fields[3].as_str(), "real" | "double" | "integer") {
        return Err(format!("line 1: unsupported field '{}', only real matrices are accepted", fields[3]));
    }
    let symmetry = match fields[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::Skew,
        other => return Err(format!("line 1: unsupported symmetry '{other}'")),
    };

    let mut data = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (size_line, size) = data.next().ok_or("missing size line")?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| format!("line {size_line}: malformed size '{t}'")))
        .collect::<std::result::Result<_, _>>()?;
    let expected = if coordinate { 3 } else { 2 };
    if dims.len() != expected {
        return Err(format!("line {size_line}: expected {expected} size fields, found {}", dims.len()));
    }
    let (m, n) = (dims[0], dims[1]);
    if symmetry != Symmetry::General && m != n {
        return Err(format!("line {size_line}: {} matrix must be square, got {m}x{n}", fields[4]));
    }
    let mut a = DenseMatrix::zeros(m, n);

    if coordinate {
        let nnz = dims[2];
        let mut seen = 0;
        for (line, entry) in data {
            let t: Vec<&str> = entry.split_whitespace().collect();
            if t.len() != 3 {
                return Err(format!("line {line}: expected 'row col value'"));
            }
            let (i, j) = (parse_index(t[0], m, line)?, parse_index(t[1], n, line)?);
            let v = parse_value(t[2], line)?;
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric if i < j => return Err(format!("line {line}: entry above the diagonal")),
                Symmetry::Skew if i <= j => {
                    return Err(format!("line {line}: skew-symmetric entry on or above the diagonal"))
                }
                Symmetry::Symmetric => {
                    if i != j {
                        a.col_mut(i)[j] += v;
                    }
                }
                Symmetry::Skew => a.col_mut(i)[j] -= v,
            }
            a.col_mut(j)[i] += v;
            seen += 1;
        }
        if seen != nnz {
            return Err(format!("expected {nnz} entries, found {seen}"));
        }
    } else {
        // Column-major; symmetric variants store the lower triangle only.
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|j| {
                let start = match symmetry {
                    Symmetry::General => 0,
                    Symmetry::Symmetric => j,
                    Symmetry::Skew => j + 1,
                };
                (start..m).map(move |i| (i, j))
            })
            .collect();
        let mut slot = slots.iter();
        for (line, entry) in data {
            for token in entry.split_whitespace() {
                let &(i, j) =
                    slot.next().ok_or_else(|| format!("line {line}: more values than the {}x{} size allows", m, n))?;
                let v = parse_value(token, line)?;
                a.col_mut(j)[i] = v;
                match symmetry {
                    Symmetry::General => {}
                    Symmetry::Symmetric => a.col_mut(i)[j] = v,
                    Symmetry::Skew => a.col_mut(i)[j] = -v,
                }
            }
        }
        if slot.next().is_some() {
            return Err(format!("expected {} values, found fewer", slots.len()));
        }
    }
    Ok(a)
}

/// Comma-separated rows, one matrix row per record. Lines starting with `#`
/// are comments.
pub fn parse_csv(text: &str) -> std::result::Result<DenseMatrix, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| e.to_string())?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        rows.push(record.iter().map(|t| parse_value(t, line)).collect::<std::result::Result<_, _>>()?);
    }
    if rows.is_empty() {
        return Err("no matrix rows found".into());
    }
    Ok(DenseMatrix::from_rows(&rows))
}
