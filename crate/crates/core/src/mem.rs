//! Resident-memory figures from `/proc/self/status` (Linux only; `None`
//! elsewhere).

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct MemInfo {
    /// Current resident set size in KiB.
    pub rss_kb: u64,
    /// Peak resident set size in KiB.
    pub hwm_kb: u64,
}

pub fn current() -> Option<MemInfo> {
    let text = std::fs::read_to_string("/proc/self/status").ok()?;
    let field = |name: &str| -> Option<u64> {
        let line = text.lines().find(|l| l.starts_with(name))?;
        line[name.len()..].trim().trim_end_matches("kB").trim().parse().ok()
    };
    Some(MemInfo { rss_kb: field("VmRSS:")?, hwm_kb: field("VmHWM:")? })
}
