use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use morgandk_core::parser::{parse_file_located, Declaration, ParseError, SourceSpan};

#[derive(Debug)]
pub enum InputError {
    Missing(PathBuf),
    Read(PathBuf, std::io::Error),
    Parse(ParseError),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Missing(p) => write!(f, "{}: no such file", p.display()),
            InputError::Read(p, e) => write!(f, "{}: {e}", p.display()),
            InputError::Parse(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for InputError {}

/// Fails on the first path that is not a readable file.
pub fn ensure_exist<P: AsRef<Path>>(paths: &[P]) -> Result<(), InputError> {
    match paths.iter().find(|p| !p.as_ref().is_file()) {
        Some(p) => Err(InputError::Missing(p.as_ref().to_path_buf())),
        None => Ok(()),
    }
}

/// Reads and parses every file, concurrently, and concatenates the
/// declarations in argument order. Spans carry the path as given.
pub fn load<P: AsRef<Path> + Sync>(
    paths: &[P],
) -> Result<Vec<(Declaration, SourceSpan)>, InputError> {
    ensure_exist(paths)?;
    let parsed: Vec<_> = thread::scope(|s| {
        let handles: Vec<_> = paths
            .iter()
            .map(|p| s.spawn(move || load_one(p.as_ref())))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("parser thread panicked"))
            .collect()
    });
    let mut out = Vec::new();
    for r in parsed {
        out.extend(r?);
    }
    Ok(out)
}

fn load_one(path: &Path) -> Result<Vec<(Declaration, SourceSpan)>, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError::Read(path.to_path_buf(), e))?;
    let label = path.to_string_lossy();
    parse_file_located(&text, Some(&label)).map_err(InputError::Parse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn loads_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.dk");
        let b = dir.path().join("b.dk");
        fs::File::create(&a)
            .unwrap()
            .write_all(b"A : Type.\n")
            .unwrap();
        fs::File::create(&b)
            .unwrap()
            .write_all(b"\nx : A.\n")
            .unwrap();
        let ds = load(&[&a, &b]).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds[1].1.line, 2);
        assert!(ds[1].1.file.as_deref().unwrap().ends_with("b.dk"));
        let missing = dir.path().join("c.dk");
        assert!(matches!(load(&[&a, &missing]), Err(InputError::Missing(_))));
        fs::File::create(&missing)
            .unwrap()
            .write_all(b"x : .")
            .unwrap();
        let Err(InputError::Parse(e)) = load(&[&missing]) else {
            panic!()
        };
        assert!(e.to_string().contains("c.dk:1:"));
    }
}
