//! Pulling payloads out of free-form model responses.

struct Fence<'a> {
    info: &'a str,
    body: &'a str,
}

fn fences(text: &str) -> Vec<Fence<'_>> {
    let mut out = Vec::new();
    let mut offset = 0;
    let mut open: Option<(&str, usize)> = None;
    for line in text.split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        let trimmed = line.trim_start();
        if !trimmed.starts_with("```") {
            continue;
        }
        match open {
            None => open = Some((trimmed[3..].trim(), offset)),
            Some((info, body_start)) => {
                out.push(Fence { info, body: &text[body_start..start] });
                open = None;
            }
        }
    }
    if let Some((info, body_start)) = open {
        out.push(Fence { info, body: &text[body_start.min(text.len())..] });
    }
    out
}

/// The first fenced code block if there is one, otherwise the whole text.
pub fn extract_turtle(text: &str) -> &str {
    fences(text).into_iter().next().map_or(text, |f| f.body)
}

/// Body of the first fenced block whose info string equals `tag`.
pub fn extract_tagged_block<'a>(text: &'a str, tag: &str) -> Option<&'a str> {
    fences(text).into_iter().find(|f| f.info.eq_ignore_ascii_case(tag)).map(|f| f.body)
}
