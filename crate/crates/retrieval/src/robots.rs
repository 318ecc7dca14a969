use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobotsRule {
    pub allow: bool,
    pub path: String,
}

/// One `User-agent` block: its agent patterns and rules in file order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RobotsGroup {
    pub agents: Vec<String>,
    pub rules: Vec<RobotsRule>,
}

/// Parsed robots.txt for one host.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotsPolicy {
    host: String,
    groups: Vec<RobotsGroup>,
    fetched_at: u64,
    /// Set when the policy is a permissive stand-in for an unreachable file.
    warning: Option<String>,
}

fn now_secs() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl RobotsPolicy {
    pub fn allow_all(host: impl Into<String>) -> Self {
        Self { host: host.into(), groups: Vec::new(), fetched_at: now_secs(), warning: None }
    }

    pub fn allow_all_with_warning(host: impl Into<String>, warning: impl Into<String>) -> Self {
        Self { warning: Some(warning.into()), ..Self::allow_all(host) }
    }

    /// Parses a robots.txt body. Unknown directives and malformed lines are
    /// skipped; rules before the first `User-agent` line are ignored.
    pub fn parse(host: impl Into<String>, body: &str) -> Self {
        let mut groups: Vec<RobotsGroup> = Vec::new();
        let mut current: Option<RobotsGroup> = None;
        let mut last_was_agent = false;
        for raw in body.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let Some((key, value)) = line.split_once(':') else {
                continue;
            };
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            match key.as_str() {
                "user-agent" => {
                    if !last_was_agent {
                        if let Some(g) = current.take() {
                            groups.push(g);
                        }
                        current = Some(RobotsGroup::default());
                    }
                    if let Some(g) = current.as_mut() {
                        if !value.is_empty() {
                            g.agents.push(value.to_ascii_lowercase());
                        }
                    }
                    last_was_agent = true;
                }
                "allow" | "disallow" => {
                    last_was_agent = false;
                    let Some(g) = current.as_mut() else {
                        continue;
                    };
                    // an empty Disallow matches nothing
                    if value.is_empty() {
                        continue;
                    }
                    let path = if value.starts_with('/') || value.starts_with('*') {
                        value.to_string()
                    } else {
                        format!("/{value}")
                    };
                    g.rules.push(RobotsRule { allow: key == "allow", path });
                }
                _ => last_was_agent = false,
            }
        }
        if let Some(g) = current {
            groups.push(g);
        }
        groups.retain(|g| !g.agents.is_empty());
        Self { host: host.into(), groups, fetched_at: now_secs(), warning: None }
    }

    pub fn host(&self) -> &str {
        &self.host
    }

    pub fn groups(&self) -> &[RobotsGroup] {
        &self.groups
    }

    pub fn fetched_at(&self) -> u64 {
        self.fetched_at
    }

    pub fn warning(&self) -> Option<&str> {
        self.warning.as_deref()
    }

    /// Rules that apply to `agent`: the groups with the longest agent pattern
    /// contained in the agent's product token, merged; `*` groups otherwise.
    fn rules_for(&self, agent: &str) -> Vec<&RobotsRule> {
        let token = product_token(agent);
        let mut best: Option<usize> = None;
        for g in &self.groups {
            for a in &g.agents {
                if a != "*" && token.contains(a.as_str()) {
                    best = best.max(Some(a.len()));
                }
            }
        }
        let selected = |g: &&RobotsGroup| match best {
            Some(len) => g.agents.iter().any(|a| a != "*" && a.len() == len && token.contains(a.as_str())),
            None => g.agents.iter().any(|a| a == "*"),
        };
        self.groups.iter().filter(selected).flat_map(|g| g.rules.iter()).collect()
    }

    /// Longest matching rule wins; Allow beats Disallow on equal length; no
    /// matching rule means allowed. `path` may include a query string.
    pub fn is_allowed(&self, path: &str, agent: &str) -> bool {
        let path = if path.starts_with('/') { path.to_string() } else { format!("/{path}") };
        if path == "/robots.txt" {
            return true;
        }
        let mut verdict: Option<(usize, bool)> = None;
        for rule in self.rules_for(agent) {
            if !path_matches(&rule.path, &path) {
                continue;
            }
            let len = rule.path.len();
            verdict = match verdict {
                Some((l, allow)) if l > len || (l == len && allow) => Some((l, allow)),
                _ => Some((len, rule.allow)),
            };
        }
        verdict.map_or(true, |(_, allow)| allow)
    }
}

/// Lowercased product token of a user-agent string (`veritas-bot/0.1 (...)`
/// gives `veritas-bot`).
pub fn product_token(agent: &str) -> String {
    agent
        .split(|c: char| c == '/' || c.is_whitespace())
        .next()
        .unwrap_or("")
        .to_ascii_lowercase()
}

/// Prefix match with `*` wildcards and an optional trailing `$` anchor.
fn path_matches(pattern: &str, path: &str) -> bool {
    let (pattern, anchored) = match pattern.strip_suffix('$') {
        Some(p) => (p, true),
        None => (pattern, false),
    };
    let parts: Vec<&str> = pattern.split('*').collect();
    let mut pos = 0usize;
    for (i, part) in parts.iter().enumerate() {
        if i == 0 {
            if !path.starts_with(part) {
                return false;
            }
            pos = part.len();
            continue;
        }
        let last = i == parts.len() - 1;
        if last && anchored {
            return path.len() >= pos + part.len() && path.ends_with(part);
        }
        match path[pos..].find(part) {
            Some(off) => pos += off + part.len(),
            None => return false,
        }
    }
    !anchored || pos == path.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    const BOT: &str = "veritas-bot/0.1";

    #[test]
    fn single_rule() {
        let p = RobotsPolicy::parse("h", "User-agent: *\nDisallow: /private");
        assert!(!p.is_allowed("/private/x", BOT));
        assert!(!p.is_allowed("/private", BOT));
        assert!(p.is_allowed("/public", BOT));
    }

    #[test]
    fn empty_file_allows_everything() {
        let p = RobotsPolicy::parse("h", "");
        assert!(p.groups().is_empty());
        assert!(p.is_allowed("/anything", BOT));
    }

    #[test]
    fn longest_path_wins() {
        let p = RobotsPolicy::parse("h", "User-agent: *\nDisallow: /a\nAllow: /a/b\n");
        assert!(p.is_allowed("/a/b/c", BOT));
        assert!(!p.is_allowed("/a/c", BOT));
        let p = RobotsPolicy::parse("h", "User-agent: *\nAllow: /a\nDisallow: /a/b\n");
        assert!(!p.is_allowed("/a/b/c", BOT));
    }

    #[test]
    fn allow_wins_equal_length() {
        let p = RobotsPolicy::parse("h", "User-agent: *\nDisallow: /page\nAllow: /page\n");
        assert!(p.is_allowed("/page", BOT));
        let p = RobotsPolicy::parse("h", "User-agent: *\nAllow: /page\nDisallow: /page\n");
        assert!(p.is_allowed("/page", BOT));
    }

    #[test]
    fn specific_agent_group_takes_precedence() {
        let body = "User-agent: *\nDisallow: /\n\nUser-agent: veritas-bot\nDisallow: /news/private\n";
        let p = RobotsPolicy::parse("h", body);
        assert!(p.is_allowed("/news/today", BOT));
        assert!(!p.is_allowed("/news/private/1", BOT));
        assert!(!p.is_allowed("/news/today", "otherbot/2.0"));
    }

    #[test]
    fn longest_agent_pattern_selects_group() {
        let body = "User-agent: veritas\nDisallow: /a\n\nUser-agent: veritas-bot\nDisallow: /b\n";
        let p = RobotsPolicy::parse("h", body);
        assert!(p.is_allowed("/a", BOT));
        assert!(!p.is_allowed("/b", BOT));
        assert!(!p.is_allowed("/a", "veritas/1"));
    }

    #[test]
    fn shared_agent_lines_and_merged_groups() {
        let body = "User-agent: a\nUser-agent: veritas-bot\nDisallow: /x\n\nUser-agent: veritas-bot\nDisallow: /y\n";
        let p = RobotsPolicy::parse("h", body);
        assert!(!p.is_allowed("/x", BOT));
        assert!(!p.is_allowed("/y", BOT));
        assert!(!p.is_allowed("/x", "a"));
        assert!(p.is_allowed("/y", "a"));
    }

    #[test]
    fn malformed_lines_are_skipped() {
        let body = "Disallow: /orphan\ngarbage line\nUser-agent: *\nNonsense\nCrawl-delay: 4\nDisallow: /p # comment\nDisallow:\n";
        let p = RobotsPolicy::parse("h", body);
        assert!(p.is_allowed("/orphan", BOT));
        assert!(!p.is_allowed("/p", BOT));
        assert!(p.is_allowed("/q", BOT));
    }

    #[test]
    fn wildcards_and_anchors() {
        let p = RobotsPolicy::parse("h", "User-agent: *\nDisallow: /*.pdf$\nDisallow: /search*q=\n");
        assert!(!p.is_allowed("/docs/file.pdf", BOT));
        assert!(p.is_allowed("/docs/file.pdf?x=1", BOT));
        assert!(!p.is_allowed("/search?q=verstappen", BOT));
        assert!(p.is_allowed("/search", BOT));
        assert!(path_matches("/a$", "/a"));
        assert!(!path_matches("/a$", "/ab"));
    }

    #[test]
    fn robots_file_itself_is_always_allowed() {
        let p = RobotsPolicy::parse("h", "User-agent: *\nDisallow: /\n");
        assert!(p.is_allowed("/robots.txt", BOT));
        assert!(!p.is_allowed("/", BOT));
    }

    #[test]
    fn product_token_extraction() {
        assert_eq!(product_token("Veritas-Bot/0.1 (+https://x)"), "veritas-bot");
        assert_eq!(product_token("curl"), "curl");
    }
}
