//! On-disk cache of Hilbert-matrix spectra.
//!
//! One JSON file per `(N, α, solver version)`. JSON floats round-trip
//! exactly, so a cached spectrum is bit-identical to a fresh one. Read and
//! write failures fall back to recomputation.

use std::fs;
use std::path::{Path, PathBuf};

use szego::matrix::{hilbert_spectrum, HilbertSpec, SpectralData, SOLVER_VERSION};

#[derive(Debug, Clone)]
pub struct SpectrumCache {
    dir: Option<PathBuf>,
}

impl SpectrumCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir }
    }

    /// `$SZEGO_CACHE_DIR`, else `<tmp>/szego-cache`.
    pub fn default_dir() -> PathBuf {
        std::env::var_os("SZEGO_CACHE_DIR")
            .map(PathBuf::from)
            .unwrap_or_else(|| std::env::temp_dir().join("szego-cache"))
    }

    pub fn file_name(spec: HilbertSpec) -> String {
        format!(
            "spectrum-n{}-alpha{:016x}-v{}.json",
            spec.n,
            spec.alpha.to_bits(),
            SOLVER_VERSION
        )
    }

    fn load(path: &Path, spec: HilbertSpec) -> Option<SpectralData> {
        let text = fs::read_to_string(path).ok()?;
        let data: SpectralData = serde_json::from_str(&text).ok()?;
        (data.source == Some(spec) && data.len() == spec.n).then_some(data)
    }

    pub fn spectrum(&self, spec: HilbertSpec) -> SpectralData {
        let Some(dir) = &self.dir else {
            return hilbert_spectrum(spec);
        };
        let path = dir.join(Self::file_name(spec));
        if let Some(hit) = Self::load(&path, spec) {
            return hit;
        }
        let data = hilbert_spectrum(spec);
        let stored = fs::create_dir_all(dir)
            .map_err(|e| e.to_string())
            .and_then(|_| serde_json::to_string(&data).map_err(|e| e.to_string()))
            .and_then(|text| {
                // Write-then-rename so a concurrent reader never sees half a file.
                let tmp = path.with_extension(format!("tmp{}", std::process::id()));
                fs::write(&tmp, text).map_err(|e| e.to_string())?;
                fs::rename(&tmp, &path).map_err(|e| e.to_string())
            });
        if let Err(e) = stored {
            eprintln!("warning: could not write spectrum cache {}: {e}", path.display());
        }
        data
    }
}
