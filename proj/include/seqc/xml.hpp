#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace seqc::xml {

/// A parsed element. Character data is kept only when it is not pure
/// whitespace; the documents read by seqc are attribute-driven.
struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Element> children;
    std::string text;
    int line = 0;

    std::optional<std::string> attr(std::string_view key) const;
    bool has_attr(std::string_view key) const { return attr(key).has_value(); }

    /// Throws XmlSyntax naming the element and line when the attribute is absent.
    std::string required_attr(std::string_view key) const;

    /// Throws XmlSyntax when any child element is not one of `allowed`.
    void expect_children(std::initializer_list<std::string_view> allowed) const;
};

/// Parses a complete document and returns its root element.
/// Throws seqc::Error(XmlSyntax) with the line of the first problem.
Element parse(std::string_view text);

/// Streaming writer for canonical, two-space-indented output with LF endings.
class Writer {
public:
    Writer();

    void open(std::string_view name,
              std::initializer_list<std::pair<std::string_view, std::string_view>> attrs = {});
    void open(std::string_view name,
              const std::vector<std::pair<std::string, std::string>>& attrs);
    void empty(std::string_view name,
               std::initializer_list<std::pair<std::string_view, std::string_view>> attrs = {});
    void empty(std::string_view name,
               const std::vector<std::pair<std::string, std::string>>& attrs);
    void close();

    std::string str() const;

private:
    void start_tag(std::string_view name);
    void attribute(std::string_view key, std::string_view value);

    std::string out_;
    std::vector<std::string> stack_;
};

std::string escape(std::string_view raw);

}  // namespace seqc::xml
