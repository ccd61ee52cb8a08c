use std::fmt::Write;

use super::{DictionaryDocument, EntryBlock, OTHER_SECTION};

const STYLE: &str = "body{font-family:serif;max-width:48em;margin:auto;padding:1em}\
nav.letters a{margin-right:.6em}\
article.entry{margin:.4em 0}\
.headword{font-weight:bold}\
.pos{font-style:italic}\
.sense{margin-left:1em}\
.example{display:block;margin-left:2em;font-size:.95em}\
.example .translation{font-style:italic}\
#finderlist li{list-style:none}";

fn escape_html(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

/// Anchor for a letter section. Letters are arbitrary grapheme clusters, so
/// anything outside `[A-Za-z0-9-]` is hex-encoded.
pub fn section_anchor(letter: &str) -> String {
    if letter == OTHER_SECTION {
        return "letter-other".to_owned();
    }
    let mut out = String::from("letter-");
    for c in letter.chars() {
        if c.is_ascii_alphanumeric() || c == '-' {
            out.push(c);
        } else {
            let _ = write!(out, "_{:x}", c as u32);
        }
    }
    out
}

fn html_entry(out: &mut String, e: &EntryBlock) {
    let _ = write!(
        out,
        "<article class=\"entry\" id=\"{}\"><span class=\"headword\">{}</span>",
        escape_html(&e.entry_id),
        escape_html(&e.display)
    );
    if !e.pos.is_empty() {
        let _ = write!(out, " <span class=\"pos\">{}</span>", escape_html(&e.pos));
    }
    out.push_str("<ol class=\"senses\">");
    for s in &e.senses {
        let _ = write!(out, "<li class=\"sense\" value=\"{}\">", s.number);
        if !s.gloss.is_empty() {
            let _ = write!(out, "<span class=\"gloss\">{}</span>", escape_html(&s.gloss));
        }
        if let Some(d) = s.definition.as_deref().filter(|d| !d.is_empty()) {
            let _ = write!(out, " <span class=\"definition\">{}</span>", escape_html(d));
        }
        if let Some(sd) = s.semantic_domain.as_deref().filter(|d| !d.is_empty()) {
            let _ = write!(out, " <span class=\"domain\">[{}]</span>", escape_html(sd));
        }
        for ex in &s.examples {
            let _ = write!(
                out,
                "<span class=\"example\"><span class=\"vernacular\">{}</span> <span class=\"translation\">{}</span></span>",
                escape_html(&ex.vernacular),
                escape_html(&ex.translation)
            );
        }
        out.push_str("</li>");
    }
    out.push_str("</ol>");
    if !e.variants.is_empty() {
        let vs: Vec<String> = e.variants.iter().map(|v| escape_html(v)).collect();
        let _ = write!(out, "<span class=\"variants\">Var. {}</span>", vs.join(", "));
    }
    out.push_str("</article>\n");
}

/// Self-contained interactive dictionary page.
pub fn render_html(doc: &DictionaryDocument) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "<!DOCTYPE html>\n<html lang=\"{}\">\n<head>\n<meta charset=\"utf-8\">\n<title>{}</title>\n<style>{}</style>\n</head>\n<body>\n<h1>{}</h1>\n",
        escape_html(&doc.language),
        escape_html(&doc.title),
        STYLE,
        escape_html(&doc.title)
    );
    out.push_str("<nav class=\"letters\">");
    for s in &doc.sections {
        let _ = write!(out, "<a href=\"#{}\">{}</a>", section_anchor(&s.letter), escape_html(&s.letter));
    }
    if !doc.reversal.is_empty() {
        out.push_str("<a href=\"#finderlist\">Finderlist</a>");
    }
    out.push_str("</nav>\n");
    for s in &doc.sections {
        let _ = writeln!(
            out,
            "<section class=\"letter\" id=\"{}\">\n<h2>{}</h2>",
            section_anchor(&s.letter),
            escape_html(&s.letter)
        );
        for e in &s.entries {
            html_entry(&mut out, e);
        }
        out.push_str("</section>\n");
    }
    if !doc.reversal.is_empty() {
        out.push_str("<section id=\"finderlist\">\n<h2>Finderlist</h2>\n<ul>\n");
        for item in &doc.reversal {
            let links: Vec<String> = item
                .refs
                .iter()
                .map(|r| format!("<a href=\"#{}\">{}</a>", escape_html(&r.entry_id), escape_html(&r.display)))
                .collect();
            let _ = writeln!(out, "<li><span class=\"gloss\">{}</span> {}</li>", escape_html(&item.gloss), links.join(", "));
        }
        out.push_str("</ul>\n</section>\n");
    }
    out.push_str("</body>\n</html>\n");
    out
}

fn escape_markup(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if matches!(c, '\\' | '*' | '_' | '#' | '[' | ']' | '`') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

fn print_entry(out: &mut String, e: &EntryBlock) {
    let _ = write!(out, "**{}**", escape_markup(&e.display));
    if !e.pos.is_empty() {
        let _ = write!(out, " _{}._", escape_markup(&e.pos));
    }
    let numbered = e.senses.len() > 1;
    for s in &e.senses {
        out.push(' ');
        if numbered {
            let _ = write!(out, "{}. ", s.number);
        }
        let text = match s.definition.as_deref().filter(|d| !d.is_empty()) {
            Some(d) if !s.gloss.is_empty() => format!("{}: {}", escape_markup(&s.gloss), escape_markup(d)),
            Some(d) => escape_markup(d),
            None => escape_markup(&s.gloss),
        };
        out.push_str(&text);
        out.push('.');
        for ex in &s.examples {
            let _ = write!(out, " _{}_ ‘{}’", escape_markup(&ex.vernacular), escape_markup(&ex.translation));
        }
    }
    if !e.variants.is_empty() {
        let vs: Vec<String> = e.variants.iter().map(|v| escape_markup(v)).collect();
        let _ = write!(out, " Var. {}.", vs.join(", "));
    }
    out.push_str("\n\n");
}

/// Print-oriented markup for external typesetting: a level-one heading for
/// each part, a level-two heading per letter, one paragraph per entry.
pub fn render_print(doc: &DictionaryDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}\n", escape_markup(&doc.title));
    for s in &doc.sections {
        let _ = writeln!(out, "## {}\n", escape_markup(&s.letter));
        for e in &s.entries {
            print_entry(&mut out, e);
        }
    }
    if !doc.reversal.is_empty() {
        out.push_str("# Finderlist\n\n");
        for item in &doc.reversal {
            let targets: Vec<String> = item.refs.iter().map(|r| escape_markup(&r.display)).collect();
            let _ = writeln!(out, "**{}** {}\n", escape_markup(&item.gloss), targets.join(", "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::compile_dictionary;
    use crate::model::{LexicalEntry, Project};
    use crate::Id;

    fn one_entry_doc() -> (DictionaryDocument, String) {
        let mut p = Project::new("Lexicon", "Test", "tst", Id::generate()).unwrap();
        p.alphabet = ["a", "b", "i", "k", "t"].iter().map(|s| s.to_string()).collect();
        let e = LexicalEntry::new(p.id.clone(), "kitab", "n", "book");
        let id = e.id.to_string();
        (compile_dictionary(&[e], &p), id)
    }

    #[test]
    fn html_has_one_headword_and_entry_anchor() {
        let (doc, id) = one_entry_doc();
        let html = render_html(&doc);
        assert_eq!(html.matches("class=\"headword\"").count(), 1);
        assert!(html.contains(&format!("id=\"{id}\"")));
        assert!(html.contains("id=\"letter-k\""));
        assert!(!html.contains("<script"));
    }

    #[test]
    fn finderlist_links_back_to_entry() {
        let (doc, id) = one_entry_doc();
        let html = render_html(&doc);
        let finder = &html[html.find("id=\"finderlist\"").unwrap()..];
        assert!(finder.contains("<span class=\"gloss\">book</span>"));
        assert!(finder.contains(&format!("<a href=\"#{id}\">kitab</a>")));
    }

    #[test]
    fn rendering_is_deterministic() {
        let (doc, _) = one_entry_doc();
        assert_eq!(render_html(&doc), render_html(&doc));
        assert_eq!(render_print(&doc), render_print(&doc));
    }

    #[test]
    fn print_markup_shape() {
        let (doc, _) = one_entry_doc();
        let text = render_print(&doc);
        assert_eq!(text, "# Lexicon\n\n## k\n\n**kitab** _n._ book.\n\n# Finderlist\n\n**book** kitab\n\n");
    }

    #[test]
    fn escaping() {
        assert_eq!(escape_html("<a href=\"x\">&'"), "&lt;a href=&quot;x&quot;&gt;&amp;&#39;");
        assert_eq!(section_anchor("ch"), "letter-ch");
        assert_eq!(section_anchor("ñ"), "letter-_f1");
        assert_eq!(section_anchor("#"), "letter-other");
    }
}
