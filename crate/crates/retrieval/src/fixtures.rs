use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::RetrievalError;

pub const INDEX_FILE: &str = "index.json";
const INDEX_VERSION: u32 = 1;

/// Hex SHA-256 of a URL; the file stem under which its page is stored.
pub fn fixture_key(url: &str) -> String {
    hex::encode(Sha256::digest(url.as_bytes()))
}

/// Lowercased, whitespace-collapsed query used as the index key.
pub fn normalize_query(query: &str) -> String {
    query.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct FixtureIndex {
    version: u32,
    /// Normalized query to SERP fixture file name.
    queries: BTreeMap<String, String>,
}

impl Default for FixtureIndex {
    fn default() -> Self {
        Self { version: INDEX_VERSION, queries: BTreeMap::new() }
    }
}

/// A recorded page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageFixture {
    pub key: String,
    pub url: String,
    pub body: String,
}

/// Directory of recorded pages (`<sha256(url)>.html`, stored verbatim) plus
/// an `index.json` mapping normalized queries to SERP fixture files.
#[derive(Debug)]
pub struct FixtureStore {
    dir: PathBuf,
    index: FixtureIndex,
    digest: OnceLock<String>,
}

impl FixtureStore {
    /// Opens `dir`. A missing index file means no SERPs are recorded.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, RetrievalError> {
        let dir = dir.as_ref().to_path_buf();
        if !dir.is_dir() {
            return Err(RetrievalError::Fixture(format!("{} is not a directory", dir.display())));
        }
        let index_path = dir.join(INDEX_FILE);
        let index = if index_path.exists() {
            let raw = fs::read_to_string(&index_path).map_err(|e| fixture_io(&index_path, e))?;
            let index: FixtureIndex = serde_json::from_str(&raw)
                .map_err(|e| RetrievalError::Fixture(format!("{}: {e}", index_path.display())))?;
            if index.version != INDEX_VERSION {
                return Err(RetrievalError::Fixture(format!("unsupported index version {}", index.version)));
            }
            index
        } else {
            FixtureIndex::default()
        };
        Ok(Self { dir, index, digest: OnceLock::new() })
    }

    /// Creates `dir` if needed and opens it for recording.
    pub fn create(dir: impl AsRef<Path>) -> Result<Self, RetrievalError> {
        fs::create_dir_all(dir.as_ref()).map_err(|e| fixture_io(dir.as_ref(), e))?;
        Self::open(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn page_path(&self, url: &str) -> PathBuf {
        self.dir.join(format!("{}.html", fixture_key(url)))
    }

    pub fn page(&self, url: &str) -> Result<Option<String>, RetrievalError> {
        read_optional(&self.page_path(url))
    }

    pub fn page_fixture(&self, url: &str) -> Result<Option<PageFixture>, RetrievalError> {
        Ok(self.page(url)?.map(|body| PageFixture { key: fixture_key(url), url: url.to_string(), body }))
    }

    /// Recorded SERP body for `query`, if any.
    pub fn serp(&self, query: &str) -> Result<Option<String>, RetrievalError> {
        match self.index.queries.get(&normalize_query(query)) {
            Some(file) => {
                let path = self.dir.join(file);
                match read_optional(&path)? {
                    Some(body) => Ok(Some(body)),
                    None => Err(RetrievalError::Fixture(format!("index names missing file {file}"))),
                }
            }
            None => Ok(None),
        }
    }

    pub fn queries(&self) -> impl Iterator<Item = &str> {
        self.index.queries.keys().map(String::as_str)
    }

    pub fn record_page(&mut self, url: &str, body: &str) -> Result<PageFixture, RetrievalError> {
        let path = self.page_path(url);
        fs::write(&path, body).map_err(|e| fixture_io(&path, e))?;
        self.digest = OnceLock::new();
        Ok(PageFixture { key: fixture_key(url), url: url.to_string(), body: body.to_string() })
    }

    /// Stores `body` as the SERP for `query` under the key of `serp_url`.
    pub fn record_serp(&mut self, query: &str, serp_url: &str, body: &str) -> Result<PageFixture, RetrievalError> {
        let page = self.record_page(serp_url, body)?;
        self.index.queries.insert(normalize_query(query), format!("{}.html", page.key));
        self.write_index()?;
        Ok(page)
    }

    fn write_index(&mut self) -> Result<(), RetrievalError> {
        let path = self.dir.join(INDEX_FILE);
        let json = serde_json::to_string_pretty(&self.index).expect("index serializes");
        fs::write(&path, json + "\n").map_err(|e| fixture_io(&path, e))?;
        self.digest = OnceLock::new();
        Ok(())
    }

    /// SHA-256 over every file name and body in the directory, in name order.
    /// Identifies the fixture set in cache keys.
    pub fn digest(&self) -> &str {
        self.digest.get_or_init(|| {
            let mut names: Vec<PathBuf> = fs::read_dir(&self.dir)
                .map(|rd| rd.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.is_file()).collect())
                .unwrap_or_default();
            names.sort();
            let mut h = Sha256::new();
            for p in names {
                h.update(p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default().as_bytes());
                h.update([0]);
                h.update(fs::read(&p).unwrap_or_default());
                h.update([0]);
            }
            hex::encode(h.finalize())
        })
    }
}

fn read_optional(path: &Path) -> Result<Option<String>, RetrievalError> {
    match fs::read(path) {
        Ok(bytes) => Ok(Some(String::from_utf8_lossy(&bytes).into_owned())),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(fixture_io(path, e)),
    }
}

fn fixture_io(path: &Path, e: std::io::Error) -> RetrievalError {
    RetrievalError::Fixture(format!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_stable_hex_digests() {
        let k = fixture_key("https://example.org/a");
        assert_eq!(k.len(), 64);
        assert_eq!(k, fixture_key("https://example.org/a"));
        assert_ne!(k, fixture_key("https://example.org/b"));
    }

    #[test]
    fn normalizes_queries() {
        assert_eq!(normalize_query("  Max  Verstappen\tWINS "), "max verstappen wins");
    }

    #[test]
    fn record_and_replay() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = FixtureStore::create(dir.path()).unwrap();
        let before = store.digest().to_string();
        store.record_page("https://news.example/a", "<p>hello</p>").unwrap();
        store.record_serp("Some Query", "https://search.example/search?q=Some+Query", "<html/>").unwrap();
        assert_ne!(store.digest(), before);

        let store = FixtureStore::open(dir.path()).unwrap();
        assert_eq!(store.page("https://news.example/a").unwrap().as_deref(), Some("<p>hello</p>"));
        assert_eq!(store.page("https://news.example/zzz").unwrap(), None);
        assert_eq!(store.serp("some   query").unwrap().as_deref(), Some("<html/>"));
        assert_eq!(store.serp("other").unwrap(), None);
        assert_eq!(store.queries().collect::<Vec<_>>(), vec!["some query"]);
    }

    #[test]
    fn open_rejects_missing_dir() {
        assert!(FixtureStore::open("/definitely/not/here").is_err());
    }
}
