use std::collections::HashSet;
use std::path::PathBuf;

use plainalign_core::corpus::Document;
use plainalign_core::preprocess::{document_from_text, RuleSplitter};
use scraper::{ElementRef, Html, Node, Selector};

use crate::config::{parse_selector, SiteConfig};
use crate::error::{HarvestError, Result};

/// Text, title and outgoing links of one page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extracted {
    /// One entry per block, whitespace collapsed, empty blocks dropped.
    pub paragraphs: Vec<String>,
    pub title: Option<String>,
    /// Absolute link targets outside removed regions, without fragments, in page order.
    pub links: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractedDocument {
    pub document: Document,
    pub url: String,
    pub links: Vec<String>,
    pub raw_html: Vec<u8>,
    /// Set once the raw page has been written out.
    pub raw_html_path: Option<PathBuf>,
}

const BLOCKS: &[&str] = &[
    "address", "article", "aside", "blockquote", "dd", "details", "div", "dl", "dt", "figcaption", "figure",
    "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "li", "main", "nav", "ol", "p", "pre",
    "section", "summary", "table", "tbody", "td", "tfoot", "th", "thead", "tr", "ul",
];

const SKIPPED: &[&str] = &["script", "style", "noscript", "template", "head"];

/// Absolute form of `url` without its fragment, or `None` when it does not parse.
pub fn normalize_url(url: &str) -> Option<String> {
    let mut u = url::Url::parse(url.trim()).ok()?;
    u.set_fragment(None);
    Some(u.to_string())
}

struct Flattener {
    paragraphs: Vec<String>,
    current: String,
}

impl Flattener {
    fn boundary(&mut self) {
        let text = self.current.split_whitespace().collect::<Vec<_>>().join(" ");
        if !text.is_empty() {
            self.paragraphs.push(text);
        }
        self.current.clear();
    }

    fn walk(&mut self, el: ElementRef) {
        for child in el.children() {
            match child.value() {
                Node::Text(t) => self.current.push_str(t),
                Node::Element(e) => {
                    let name = e.name();
                    if SKIPPED.contains(&name) {
                        continue;
                    }
                    if name == "br" {
                        self.boundary();
                        continue;
                    }
                    let block = BLOCKS.contains(&name);
                    if block {
                        self.boundary();
                    }
                    if let Some(child_el) = ElementRef::wrap(child) {
                        self.walk(child_el);
                    }
                    if block {
                        self.boundary();
                    }
                }
                _ => {}
            }
        }
    }
}

fn collapsed_text(el: ElementRef) -> String {
    el.text().collect::<Vec<_>>().join(" ").split_whitespace().collect::<Vec<_>>().join(" ")
}

fn page_title(html: &Html) -> Option<String> {
    for css in ["title", "h1"] {
        let sel = Selector::parse(css).expect("static selector");
        if let Some(t) = html.select(&sel).map(collapsed_text).find(|t| !t.is_empty()) {
            return Some(t);
        }
    }
    None
}

/// Flattens the content of a page.
///
/// Elements matching any remove selector are dropped first. The text under
/// the outermost content-selector matches is then split into paragraphs at
/// block elements and `<br>`; script and style contents are ignored.
pub fn extract_text(html: &[u8], cfg: &SiteConfig, url: &str) -> Result<Extracted> {
    let source = String::from_utf8_lossy(html);
    let mut page = Html::parse_document(&source);
    let title = page_title(&page);
    for raw in &cfg.remove_selectors {
        let sel = parse_selector(raw)?;
        let ids: Vec<_> = page.root_element().select(&sel).map(|e| e.id()).collect();
        for id in ids {
            if let Some(mut node) = page.tree.get_mut(id) {
                node.detach();
            }
        }
    }
    let content = parse_selector(&cfg.content_selector)?;
    // Html::select walks the whole node arena, detached nodes included.
    let matches: Vec<ElementRef> = page.root_element().select(&content).collect();
    let ids: HashSet<_> = matches.iter().map(|m| m.id()).collect();
    let outermost: Vec<ElementRef> = matches
        .into_iter()
        .filter(|m| !m.ancestors().any(|a| ids.contains(&a.id())))
        .collect();
    if outermost.is_empty() {
        return Err(HarvestError::Extract {
            site_id: cfg.site_id.clone(),
            url: url.to_string(),
            message: format!("content selector {:?} matched nothing", cfg.content_selector),
        });
    }
    let mut flat = Flattener { paragraphs: Vec::new(), current: String::new() };
    for el in outermost {
        flat.walk(el);
        flat.boundary();
    }
    let base = url::Url::parse(url).ok();
    let anchor = Selector::parse("a[href]").expect("static selector");
    let mut links = Vec::new();
    for a in page.root_element().select(&anchor) {
        let href = a.value().attr("href").unwrap_or_default();
        let resolved = match &base {
            Some(b) => b.join(href).ok().map(|u| u.to_string()),
            None => Some(href.to_string()),
        };
        if let Some(link) = resolved.as_deref().and_then(normalize_url) {
            if !links.contains(&link) {
                links.push(link);
            }
        }
    }
    Ok(Extracted { paragraphs: flat.paragraphs, title, links })
}

impl Extracted {
    /// Segments the paragraphs into a document.
    pub fn into_document(self, doc_id: &str) -> Result<(Document, Vec<String>)> {
        let text = self.paragraphs.join("\n\n");
        let mut doc = document_from_text(doc_id, &text, &RuleSplitter::default())?;
        doc.title = self.title;
        Ok((doc, self.links))
    }
}
