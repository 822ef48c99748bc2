#include <doctest.h>

#include <string>

#include "seccorpus/extract.hpp"
#include "seccorpus/html.hpp"

using namespace seccorpus;

TEST_CASE("detect_format precedence: magic > content-type > extension > fallback") {
    CHECK(detect_format("%PDF-1.7 ...", "text/html", "http://x/a.txt").kind ==
          FormatKind::pdf_external);
    CHECK(detect_format("%PDF-1.7", "", "").confidence == DetectSource::header_magic);

    CHECK(detect_format("<!DOCTYPE html><html>", "", "").kind == FormatKind::html);
    CHECK(detect_format("  \n<html lang=\"en\">", "", "").kind == FormatKind::html);

    auto by_header = detect_format("plain words", "text/html", "");
    CHECK(by_header.kind == FormatKind::html);
    CHECK(by_header.confidence == DetectSource::content_type);
    CHECK(detect_format("x", "text/html; charset=utf-8", "").kind == FormatKind::html);
    CHECK(detect_format("x", "text/markdown", "").kind == FormatKind::markdown);
    CHECK(detect_format("x", "application/pdf", "").kind == FormatKind::pdf_external);

    auto by_ext = detect_format("body", "", "http://a.com/doc.md");
    CHECK(by_ext.kind == FormatKind::markdown);
    CHECK(by_ext.confidence == DetectSource::extension);
    CHECK(detect_format("b", "", "http://a.com/p.html?q=1").kind == FormatKind::html);

    auto fallback_text = detect_format("just some words", "", "");
    CHECK(fallback_text.kind == FormatKind::plain_text);
    CHECK(fallback_text.confidence == DetectSource::fallback);

    std::string binary = std::string("\x00\xff\xfe\x01", 4);
    CHECK(detect_format(binary, "", "").kind == FormatKind::unknown);
    CHECK(detect_format("\x89PNG then stuff", "", "").kind == FormatKind::unknown);
}

TEST_CASE("extract_text normalizes plain text") {
    auto out = extract_text("a\r\nb", "text/plain", "http://x/t.txt");
    REQUIRE(out.kept());
    CHECK(out.doc->text == "a\nb");
    CHECK(out.doc->extractor_name == "passthrough");
    CHECK(out.doc->char_count == 3);

    auto cr = extract_text("a\rb\r\nc", "text/plain", "");
    CHECK(cr.doc->text == "a\nb\nc");
}

TEST_CASE("extract_text drops what it cannot handle, with reasons") {
    std::string binary = std::string("\x00\x01\x02\xff", 4);
    auto unknown = extract_text(binary, "", "");
    CHECK_FALSE(unknown.kept());
    CHECK(unknown.drop_reason == "unknown_format");

    ExtractConfig tiny;
    tiny.max_bytes = 4;
    auto oversize = extract_text("way too big", "text/plain", "", tiny);
    CHECK_FALSE(oversize.kept());
    CHECK(oversize.drop_reason == "oversize");

    auto pdf = extract_text("%PDF-1.4 ...", "", "");
    CHECK_FALSE(pdf.kept());
    CHECK(pdf.drop_reason == "no_external_converter");

    ExtractConfig bad_cmd;
    bad_cmd.external_pdf_command = "false";
    auto failed = extract_text("%PDF-1.4 ...", "", "", bad_cmd);
    CHECK_FALSE(failed.kept());
    CHECK(failed.drop_reason == "external_failed");
}

TEST_CASE("external converter hook pipes stdin to stdout") {
    ExtractConfig cfg;
    cfg.external_pdf_command = "tr 'a-z' 'A-Z'";
    auto out = extract_text("%PDF-pretend body", "", "", cfg);
    REQUIRE(out.kept());
    CHECK(out.doc->text == "%PDF-PRETEND BODY");
    CHECK(out.doc->extractor_name == "external_pdf");
}

TEST_CASE("extraction is deterministic and passthrough is idempotent") {
    std::string body = "line one\r\nline two\x00 tail";
    auto a = extract_text(body, "text/plain", "");
    auto b = extract_text(body, "text/plain", "");
    REQUIRE(a.kept());
    CHECK(a.doc->text == b.doc->text);
    CHECK(a.doc->doc_id == b.doc->doc_id);

    auto again = extract_text(a.doc->text, "text/plain", "");
    CHECK(again.doc->text == a.doc->text);
}

TEST_CASE("doc_id is the content address of the raw body") {
    auto a = extract_text("same body", "text/plain", "http://one/");
    auto b = extract_text("same body", "text/plain", "http://two/");
    CHECK(a.doc->doc_id == b.doc->doc_id);
    auto c = extract_text("different body", "text/plain", "http://one/");
    CHECK(c.doc->doc_id != a.doc->doc_id);
}

TEST_CASE("html_to_markdown applies the conversion table") {
    CHECK(html_to_markdown("<h1>T</h1><p>a<script>x()</script></p>") == "# T\n\na");
    CHECK(html_to_markdown("<pre>code</pre>") == "```\ncode\n```");
    CHECK(html_to_markdown("") == "");
    CHECK(html_to_markdown("<h2>Head</h2>") == "## Head");
    CHECK(html_to_markdown("<p>one</p><p>two</p>") == "one\n\ntwo");
    CHECK(html_to_markdown("<ul><li>a</li><li>b</li></ul>") == "- a\n\n- b");
    CHECK(html_to_markdown("<p>see <a href=\"/x\">docs</a> now</p>") == "see [docs](/x) now");
    CHECK(html_to_markdown("<p>use <code>rm -rf</code> carefully</p>") ==
          "use `rm -rf` carefully");
}

TEST_CASE("html_to_markdown renders table rows as pipe rows") {
    std::string html = "<table><tr><th>Name</th><th>Risk</th></tr>"
                       "<tr><td>XSS</td><td>High</td></tr></table>";
    CHECK(html_to_markdown(html) ==
          "| Name | Risk |\n\n| --- | --- |\n\n| XSS | High |");
}

TEST_CASE("dropped subtrees leave no trace") {
    std::string html = "<head><title>chrome</title><style>p{color:red}</style></head>"
                       "<body><nav><a href='/'>home</a></nav><p>real content</p>"
                       "<footer>copyright</footer><script>var x='<p>';</script></body>";
    std::string md = html_to_markdown(html);
    CHECK(md == "real content");
    CHECK(md.find("<script") == std::string::npos);
    CHECK(md.find("<style") == std::string::npos);
    CHECK(md.find("chrome") == std::string::npos);
    CHECK(md.find("copyright") == std::string::npos);
}

TEST_CASE("malformed html never crashes and does best effort") {
    CHECK(html_to_markdown("<p>unclosed") == "unclosed");
    CHECK(html_to_markdown("text < notatag >") == "text < notatag >");
    CHECK(html_to_markdown("<h1>only start") == "# only start");
    CHECK(html_to_markdown("</div></div>stray closers") == "stray closers");
    CHECK(html_to_markdown("<a href=>empty</a>") == "empty");
    CHECK(html_to_markdown("<script>never closed") == "");
}

TEST_CASE("entities decode and whitespace collapses") {
    CHECK(html_to_markdown("<p>a&amp;b &lt;tag&gt; &quot;q&quot;</p>") == "a&b <tag> \"q\"");
    CHECK(html_to_markdown("<p>lots   of\n  space</p>") == "lots of space");
    CHECK(html_to_markdown("<p>x&#65;y</p>") == "xAy");
    CHECK(html_to_markdown("<p>n&#xfc;</p>") == "n\xc3\xbc");
}

TEST_CASE("br and blank-line collapsing") {
    CHECK(html_to_markdown("<p>a<br>b</p>") == "a\nb");
    CHECK(html_to_markdown("<p>a<br><br><br><br>b</p>") == "a\n\nb");
}

TEST_CASE("pre preserves inner structure") {
    std::string html = "<pre>line1\n  indented\n\nline3</pre>";
    CHECK(html_to_markdown(html) == "```\nline1\n  indented\n\nline3\n```");
}

TEST_CASE("html conversion is deterministic") {
    std::string html = "<h1>T</h1><ul><li>x</li></ul><table><tr><td>1</td></tr></table>";
    CHECK(html_to_markdown(html) == html_to_markdown(html));
}

TEST_CASE("output is valid utf-8 even for broken input") {
    std::string bad = "<p>ok \xff\xfe broken</p>";
    std::string md = html_to_markdown(bad);
    CHECK(is_valid_utf8(md));
    CHECK(md.find("ok") != std::string::npos);
}

TEST_CASE("sanitize_utf8 strips NUL and repairs sequences") {
    std::string with_nul("a\0b", 3);
    CHECK(sanitize_utf8(with_nul) == "ab");
    CHECK(sanitize_utf8("\xc3\x28") == "\xEF\xBF\xBD(");
    CHECK(sanitize_utf8("fine") == "fine");
    CHECK(is_valid_utf8(sanitize_utf8("\xf0\x9f\x92\x96 emoji")));
}

TEST_CASE("extract_links finds anchors in order, deduped, http(s) only") {
    std::string html = "<a href=\"/a\">x</a><a href=\"/a\">y</a>"
                       "<a href=\"mailto:x@y.z\">m</a>"
                       "<a href=\"https://other.com/p#frag\">o</a>"
                       "<a href=\"ftp://files/\">f</a>"
                       "<a name=\"anchor-only\">n</a>";
    auto links = extract_links(html, "http://s.com/base/");
    REQUIRE(links.size() == 2);
    CHECK(links[0] == "http://s.com/a");
    CHECK(links[1] == "https://other.com/p");
}

TEST_CASE("extract_links on pages without anchors") {
    CHECK(extract_links("<p>no links</p>", "http://s.com").empty());
    CHECK(extract_links("", "http://s.com").empty());
    // Anchors inside script text are not links.
    CHECK(extract_links("<script>var a='<a href=\"/x\">';</script>", "http://s.com").empty());
}
