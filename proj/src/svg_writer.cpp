#include "svg_writer.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace micromap::svg {

double round2(double v)
{
    const double r = std::round(v * 100.0) / 100.0;
    return r == 0.0 ? 0.0 : r;
}

std::string num(double v)
{
    if (!std::isfinite(v))
        throw std::invalid_argument("non-finite coordinate in SVG output");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), round2(v), std::chars_format::fixed, 2);
    std::string s(buf, res.ptr);
    while (s.back() == '0')
        s.pop_back();
    if (s.back() == '.')
        s.pop_back();
    return s;
}

std::string escape(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

void Writer::indent()
{
    out_.append(2 * stack_.size(), ' ');
}

void Writer::attributes(const Attrs& attrs)
{
    for (const auto& [k, v] : attrs) {
        out_ += ' ';
        out_ += k;
        out_ += "=\"";
        out_ += escape(v);
        out_ += '"';
    }
}

void Writer::open(std::string_view tag, const Attrs& attrs)
{
    indent();
    out_ += '<';
    out_ += tag;
    attributes(attrs);
    out_ += ">\n";
    stack_.emplace_back(tag);
}

void Writer::leaf(std::string_view tag, const Attrs& attrs)
{
    indent();
    out_ += '<';
    out_ += tag;
    attributes(attrs);
    out_ += "/>\n";
}

void Writer::text(const Attrs& attrs, std::string_view content)
{
    indent();
    out_ += "<text";
    attributes(attrs);
    out_ += '>';
    out_ += escape(content);
    out_ += "</text>\n";
}

void Writer::close()
{
    const std::string tag = stack_.back();
    stack_.pop_back();
    indent();
    out_ += "</" + tag + ">\n";
}

void Writer::comment(std::string_view text)
{
    indent();
    out_ += "<!-- ";
    out_ += text;
    out_ += " -->\n";
}

std::string Writer::finish()
{
    while (!stack_.empty())
        close();
    return std::move(out_);
}

}  // namespace micromap::svg
