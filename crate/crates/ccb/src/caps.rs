//! Resource caps for the exponential searches. Every cap fails fast with
//! an estimate of the search space; nothing truncates silently.

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SearchCaps {
    /// Protocol search: product of 2^(m_i) memo keys.
    pub det_memo_keys: u64,
    /// Cover search: total cells of the input cube.
    pub cover_cells: u64,
    /// Cover search: subset combinations enumerated on the generator axes.
    pub cover_generator: u64,
    /// Fooling-set search: candidate inputs fed to the clique search.
    pub clique_vertices: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps {
            det_memo_keys: 1 << 24,
            cover_cells: 1 << 16,
            cover_generator: 1 << 20,
            clique_vertices: 4096,
        }
    }
}

impl SearchCaps {
    /// Apply `name=value` overrides, comma-separated.
    pub fn with_overrides(mut self, spec: &str) -> crate::error::Result<Self> {
        for part in spec.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| crate::error::Error::parse(format!("cap override `{part}` must be name=value")))?;
            let v: u64 = value
                .trim()
                .parse()
                .map_err(|_| crate::error::Error::parse(format!("bad cap value `{value}`")))?;
            match name.trim() {
                "det-memo-keys" => self.det_memo_keys = v,
                "cover-cells" => self.cover_cells = v,
                "cover-generator" => self.cover_generator = v,
                "clique-vertices" => self.clique_vertices = v as usize,
                other => {
                    return Err(crate::error::Error::parse(format!(
                        "unknown cap `{other}` (expected det-memo-keys, cover-cells, cover-generator, clique-vertices)"
                    )))
                }
            }
        }
        Ok(self)
    }
}
