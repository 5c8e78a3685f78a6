#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace micromap::svg {

/// Rounds to two decimals; -0 becomes 0.
double round2(double v);

/// Locale-independent shortest text for round2(v): "12.5", "3", "-0.25".
std::string num(double v);

std::string escape(std::string_view text);

using Attrs = std::vector<std::pair<std::string, std::string>>;

/// Streams indented SVG elements in call order.
class Writer {
public:
    void open(std::string_view tag, const Attrs& attrs);
    void leaf(std::string_view tag, const Attrs& attrs);
    void text(const Attrs& attrs, std::string_view content);
    void close();
    void comment(std::string_view text);
    std::string finish();

private:
    void indent();
    void attributes(const Attrs& attrs);

    std::string out_;
    std::vector<std::string> stack_;
};

}  // namespace micromap::svg
