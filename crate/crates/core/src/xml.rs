//! Minimal indented XML writer shared by the KML and SVG emitters.

use std::borrow::Cow;
use std::fmt::Write as _;

/// Escapes `& < > " '` for text nodes, attribute values and HTML.
pub fn escape(text: &str) -> Cow<'_, str> {
    if !text.contains(['&', '<', '>', '"', '\'']) {
        return Cow::Borrowed(text);
    }
    let mut out = String::with_capacity(text.len() + 16);
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
    Cow::Owned(out)
}

pub struct XmlWriter {
    out: String,
    open: Vec<&'static str>,
}

impl XmlWriter {
    pub fn new() -> Self {
        Self {
            out: String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"),
            open: Vec::new(),
        }
    }

    fn indent(&mut self) {
        for _ in 0..self.open.len() {
            self.out.push_str("  ");
        }
    }

    fn tag(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.out.push('<');
        self.out.push_str(name);
        for (key, value) in attrs {
            let _ = write!(self.out, " {key}=\"{}\"", escape(value));
        }
    }

    pub fn open(&mut self, name: &'static str, attrs: &[(&str, &str)]) {
        self.indent();
        self.tag(name, attrs);
        self.out.push_str(">\n");
        self.open.push(name);
    }

    pub fn close(&mut self) {
        let name = self.open.pop().expect("close without open element");
        self.indent();
        let _ = writeln!(self.out, "</{name}>");
    }

    pub fn leaf(&mut self, name: &str, attrs: &[(&str, &str)], text: &str) {
        self.indent();
        self.tag(name, attrs);
        let _ = writeln!(self.out, ">{}</{name}>", escape(text));
    }

    pub fn empty(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.indent();
        self.tag(name, attrs);
        self.out.push_str("/>\n");
    }

    /// Writes `content` verbatim inside a CDATA section.
    pub fn cdata(&mut self, name: &str, content: &str) {
        self.indent();
        let _ = writeln!(
            self.out,
            "<{name}><![CDATA[{}]]></{name}>",
            content.replace("]]>", "]]]]><![CDATA[>")
        );
    }

    pub fn finish(self) -> String {
        assert!(self.open.is_empty(), "unclosed elements: {:?}", self.open);
        self.out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("plain"), "plain");
        assert_eq!(escape(r#"<a href="x">'&'</a>"#), "&lt;a href=&quot;x&quot;&gt;&#39;&amp;&#39;&lt;/a&gt;");
    }

    #[test]
    fn nested_output() {
        let mut w = XmlWriter::new();
        w.open("root", &[("xmlns", "urn:x")]);
        w.leaf("name", &[], "a < b");
        w.cdata("description", "x]]>y");
        w.empty("br", &[("class", "\"")]);
        w.close();
        let text = w.finish();
        assert_eq!(
            text,
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<root xmlns=\"urn:x\">\n  <name>a &lt; b</name>\n  \
             <description><![CDATA[x]]]]><![CDATA[>y]]></description>\n  <br class=\"&quot;\"/>\n</root>\n"
        );
        let parsed = roxmltree::Document::parse(&text).unwrap();
        let desc = parsed.descendants().find(|n| n.has_tag_name("description")).unwrap();
        assert_eq!(desc.text(), Some("x]]>y"));
    }
}
