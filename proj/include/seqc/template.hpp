#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace seqc::tmpl {

// ---------------------------------------------------------------------------
// Syntax
//
//   $Root.step.step()    reference; `getX()`, `x()` and `x` name the same step
//   ${Root.step}         braced reference, for text directly after a reference
//   \$  \#               literal `$` and `#`
//   #foreach($v in $ref) ... #end
//   #if($ref) ... #elseif(!$ref) ... #else ... #end
//   #set($v = $ref | "text" | 42 | true)
//   #insert("TemplateId", $ref)   or   #insert($ref.type, $ref)
//
// A directive alone on its line swallows the line's indentation and newline.
// `#` not followed by a letter or `{` is literal text; `#word` for an unknown
// word is an UnknownDirective error.
// ---------------------------------------------------------------------------

struct ReferencePath {
    std::string root;
    std::vector<std::string> steps;  // normalized accessor names

    /// `$Root.a.b` form, for messages.
    std::string to_string() const;
    friend bool operator==(const ReferencePath&, const ReferencePath&) = default;
};

/// Strips a leading `get` (when followed by an upper-case letter) and
/// lower-cases the first letter: getName, Name and name all become `name`.
std::string normalize_accessor(std::string_view name);

struct Node;
using Body = std::vector<Node>;

struct Text {
    std::string text;
};
struct Reference {
    ReferencePath path;
};
struct Foreach {
    std::string variable;
    ReferencePath source;
    Body body;
};
struct Condition {
    ReferencePath path;
    bool negated = false;
};
struct If {
    Condition condition;
    Body then_body;
    Body else_body;  // `#elseif` nests another If here
};
using SetValue = std::variant<ReferencePath, std::string, std::int64_t, bool>;
struct Set {
    std::string variable;
    SetValue value;
};
struct Insert {
    std::variant<std::string, ReferencePath> template_id;
    ReferencePath target;
};

struct Node {
    std::variant<Text, Reference, Foreach, If, Set, Insert> value;
    int line = 1;
};

struct Template {
    std::string id;
    Body nodes;
};

/// Throws UnclosedBlock, MalformedReference or UnknownDirective with the
/// template id and line in the message.
Template parse_template(std::string_view text, std::string id = "<inline>");

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

class Object;
struct Value;
using List = std::vector<Value>;

/// Null, text, integer, boolean, list or model element.
struct Value {
    std::variant<std::monostate, std::string, std::int64_t, bool, List, std::shared_ptr<const Object>> data;

    Value() = default;
    Value(std::string s) : data(std::move(s)) {}
    Value(const char* s) : data(std::string(s)) {}
    Value(std::int64_t i) : data(i) {}
    Value(int i) : data(std::int64_t{i}) {}
    Value(bool b) : data(b) {}
    Value(List l) : data(std::move(l)) {}
    Value(std::shared_ptr<const Object> o) : data(std::move(o)) {}

    bool is_null() const { return std::holds_alternative<std::monostate>(data); }
    bool truthy() const;
};

/// A model element exposed to templates.
class Object {
public:
    virtual ~Object() = default;
    /// Looks up a normalized property; nullopt means "no such property"
    /// (as opposed to a property whose value is null).
    virtual std::optional<Value> property(std::string_view name) const = 0;
    /// Text substituted for a bare reference to this element.
    virtual std::string text() const = 0;
    /// Root name under which `#insert` exposes this element.
    virtual std::string_view kind() const = 0;
};

/// Named roots visible to a template.
using Context = std::map<std::string, Value, std::less<>>;

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

enum class Mode {
    Strict,   // unresolved references are errors
    Lenient,  // unresolved references render empty and are recorded as warnings
};

using Library = std::map<std::string, Template, std::less<>>;

class Renderer {
public:
    explicit Renderer(const Library& library = empty_library(), Mode mode = Mode::Strict)
        : library_(library), mode_(mode) {}

    /// Throws UnresolvedReference (strict), UnknownTemplateId or
    /// NonIterableInForeach, naming the template id and line.
    std::string render(const Template& tmpl, const Context& context);

    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    static const Library& empty_library();

    const Library& library_;
    Mode mode_;
    std::vector<std::string> warnings_;
};

/// Strict rendering convenience.
std::string render(const Template& tmpl, const Context& context, const Library& library = {});

}  // namespace seqc::tmpl
