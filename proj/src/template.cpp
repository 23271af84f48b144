#include "seqc/template.hpp"

#include <algorithm>
#include <cctype>

#include "seqc/error.hpp"

namespace seqc::tmpl {

std::string ReferencePath::to_string() const {
    std::string out = "$" + root;
    for (const auto& s : steps) out += "." + s;
    return out;
}

std::string normalize_accessor(std::string_view name) {
    std::string out(name);
    if (out.size() > 3 && out.compare(0, 3, "get") == 0 &&
        std::isupper(static_cast<unsigned char>(out[3])))
        out.erase(0, 3);
    if (!out.empty()) out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
    return out;
}

namespace {

bool id_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool id_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

enum class Directive { Foreach, If, Elseif, Else, End, Set, Insert };

std::optional<Directive> directive_from(std::string_view word) {
    if (word == "foreach") return Directive::Foreach;
    if (word == "if") return Directive::If;
    if (word == "elseif") return Directive::Elseif;
    if (word == "else") return Directive::Else;
    if (word == "end") return Directive::End;
    if (word == "set") return Directive::Set;
    if (word == "insert") return Directive::Insert;
    return std::nullopt;
}

class Parser {
public:
    Parser(std::string_view src, std::string id) : src_(src), id_(std::move(id)) {}

    Template run() {
        Template t;
        t.id = id_;
        auto [body, stop] = parse_body();
        if (stop) fail(ErrorCode::UnclosedBlock, stop_line_, "#" + std::string(stop_word_) + " without an open block");
        t.nodes = std::move(body);
        return t;
    }

private:
    struct Stop {
        Directive kind;
        std::optional<Condition> condition;  // for #elseif
    };

    [[noreturn]] void fail(ErrorCode code, int line, const std::string& msg) const {
        throw Error(code, "template '" + id_ + "' line " + std::to_string(line) + ": " + msg, {id_}, line);
    }

    char peek(std::size_t off = 0) const { return pos_ + off < src_.size() ? src_[pos_ + off] : '\0'; }
    bool at_end() const { return pos_ >= src_.size(); }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    void flush_text(Body& body, std::string& text, int line) {
        if (text.empty()) return;
        body.push_back(Node{Text{std::move(text)}, line});
        text.clear();
    }

    // Parses until end of input or a block-closing directive (#end, #else,
    // #elseif), which is consumed and returned.
    std::pair<Body, std::optional<Stop>> parse_body() {
        Body body;
        std::string text;
        int text_line = line_;
        while (!at_end()) {
            char c = peek();
            if (c == '\\' && (peek(1) == '$' || peek(1) == '#')) {
                if (text.empty()) text_line = line_;
                advance();
                text += advance();
                continue;
            }
            if (c == '$') {
                flush_text(body, text, text_line);
                int line = line_;
                body.push_back(Node{Reference{parse_reference()}, line});
                text_line = line_;
                continue;
            }
            if (c == '#' && (id_start(peek(1)) || peek(1) == '{')) {
                std::size_t start = pos_;
                int line = line_;
                Directive d = parse_directive_name();
                bool standalone = only_blanks_before(start);

                if (d == Directive::End || d == Directive::Else || d == Directive::Elseif) {
                    std::optional<Condition> cond;
                    if (d == Directive::Elseif) cond = parse_condition_args();
                    finish_directive(standalone, text);
                    flush_text(body, text, text_line);
                    stop_line_ = line;
                    stop_word_ = d == Directive::End ? "end" : d == Directive::Else ? "else" : "elseif";
                    return {std::move(body), Stop{d, std::move(cond)}};
                }

                Node node{Text{}, line};
                switch (d) {
                    case Directive::Foreach: node.value = parse_foreach_head(); break;
                    case Directive::If: node.value = If{parse_condition_args(), {}, {}}; break;
                    case Directive::Set: node.value = parse_set(); break;
                    case Directive::Insert: node.value = parse_insert(); break;
                    default: break;
                }
                finish_directive(standalone, text);
                flush_text(body, text, text_line);

                if (auto* fe = std::get_if<Foreach>(&node.value)) {
                    auto [inner, stop] = parse_body();
                    if (!stop || stop->kind != Directive::End)
                        fail(ErrorCode::UnclosedBlock, line,
                             stop ? "#foreach closed by #" + std::string(stop_word_) + " instead of #end"
                                  : "#foreach is missing its #end");
                    fe->body = std::move(inner);
                } else if (auto* cond = std::get_if<If>(&node.value)) {
                    parse_if_bodies(*cond, line);
                }
                body.push_back(std::move(node));
                text_line = line_;
                continue;
            }
            if (text.empty()) text_line = line_;
            text += advance();
        }
        flush_text(body, text, text_line);
        return {std::move(body), std::nullopt};
    }

    void parse_if_bodies(If& node, int line) {
        auto [then_body, stop] = parse_body();
        node.then_body = std::move(then_body);
        if (!stop) fail(ErrorCode::UnclosedBlock, line, "#if is missing its #end");
        if (stop->kind == Directive::End) return;
        if (stop->kind == Directive::Else) {
            auto [else_body, stop2] = parse_body();
            if (!stop2 || stop2->kind != Directive::End)
                fail(ErrorCode::UnclosedBlock, line, "#else branch is missing its #end");
            node.else_body = std::move(else_body);
            return;
        }
        // #elseif: the remaining chain becomes a nested If owning the #end
        If nested{*stop->condition, {}, {}};
        int nested_line = stop_line_;
        parse_if_bodies(nested, nested_line);
        node.else_body.push_back(Node{std::move(nested), nested_line});
    }

    bool only_blanks_before(std::size_t start) const {
        std::size_t i = start;
        while (i > 0 && src_[i - 1] != '\n') {
            if (src_[i - 1] != ' ' && src_[i - 1] != '\t') return false;
            --i;
        }
        return true;
    }

    // For a directive alone on its line: drop the indentation already
    // collected in `text` and consume the rest of the line.
    void finish_directive(bool standalone, std::string& text) {
        if (!standalone) return;
        std::size_t i = pos_;
        while (i < src_.size() && (src_[i] == ' ' || src_[i] == '\t' || src_[i] == '\r')) ++i;
        if (i < src_.size() && src_[i] != '\n') return;
        while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.pop_back();
        while (pos_ < i) advance();
        if (!at_end()) advance();  // the newline
    }

    Directive parse_directive_name() {
        int line = line_;
        advance();  // '#'
        bool braced = peek() == '{';
        if (braced) advance();
        std::string word;
        while (id_char(peek())) word += advance();
        if (braced) {
            if (peek() != '}') fail(ErrorCode::UnknownDirective, line, "unterminated #{" + word);
            advance();
        }
        auto d = directive_from(word);
        if (!d) fail(ErrorCode::UnknownDirective, line, "unknown directive #" + word);
        return *d;
    }

    void skip_spaces() {
        while (peek() == ' ' || peek() == '\t') advance();
    }

    void expect(char c, std::string_view what) {
        skip_spaces();
        if (peek() != c)
            fail(ErrorCode::MalformedReference, line_,
                 "expected '" + std::string(1, c) + "' in " + std::string(what));
        advance();
    }

    std::string identifier(std::string_view what) {
        if (!id_start(peek()))
            fail(ErrorCode::MalformedReference, line_, "expected an identifier in " + std::string(what));
        std::string out;
        while (id_char(peek())) out += advance();
        return out;
    }

    ReferencePath parse_reference() {
        int line = line_;
        advance();  // '$'
        bool braced = peek() == '{';
        if (braced) advance();
        if (!id_start(peek()))
            fail(ErrorCode::MalformedReference, line,
                 "'$' must start a reference (write \\$ for a literal dollar sign)");
        ReferencePath path;
        path.root = identifier("reference");
        while (peek() == '.' && id_start(peek(1))) {
            advance();
            std::string step = identifier("reference");
            if (peek() == '(') {
                advance();
                if (peek() != ')')
                    fail(ErrorCode::MalformedReference, line,
                         "accessor '" + step + "(' takes no arguments and must close with ')'");
                advance();
            }
            path.steps.push_back(normalize_accessor(step));
        }
        if (braced) {
            if (peek() != '}') fail(ErrorCode::MalformedReference, line, "unterminated ${" + path.root);
            advance();
        }
        return path;
    }

    ReferencePath argument_reference(std::string_view what) {
        skip_spaces();
        if (peek() != '$') fail(ErrorCode::MalformedReference, line_, "expected a $reference in " + std::string(what));
        return parse_reference();
    }

    std::string variable_name(std::string_view what) {
        auto ref = argument_reference(what);
        if (!ref.steps.empty())
            fail(ErrorCode::MalformedReference, line_, std::string(what) + " needs a plain $name");
        return ref.root;
    }

    std::string quoted_string(std::string_view what) {
        char quote = advance();
        std::string out;
        while (!at_end() && peek() != quote && peek() != '\n') {
            if (peek() == '\\' && (peek(1) == quote || peek(1) == '\\')) advance();
            out += advance();
        }
        if (peek() != quote) fail(ErrorCode::MalformedReference, line_, "unterminated string in " + std::string(what));
        advance();
        return out;
    }

    Condition parse_condition_args() {
        expect('(', "#if");
        skip_spaces();
        Condition cond;
        if (peek() == '!') {
            advance();
            cond.negated = true;
        }
        cond.path = argument_reference("#if");
        expect(')', "#if");
        return cond;
    }

    Foreach parse_foreach_head() {
        expect('(', "#foreach");
        Foreach fe;
        fe.variable = variable_name("#foreach");
        skip_spaces();
        if (identifier("#foreach") != "in") fail(ErrorCode::MalformedReference, line_, "#foreach expects 'in'");
        fe.source = argument_reference("#foreach");
        expect(')', "#foreach");
        return fe;
    }

    Set parse_set() {
        expect('(', "#set");
        Set s;
        s.variable = variable_name("#set");
        expect('=', "#set");
        skip_spaces();
        char c = peek();
        if (c == '$') {
            s.value = parse_reference();
        } else if (c == '"' || c == '\'') {
            s.value = quoted_string("#set");
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
            std::string digits;
            digits += advance();
            while (std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
            if (digits == "-") fail(ErrorCode::MalformedReference, line_, "malformed number in #set");
            s.value = std::int64_t{std::stoll(digits)};
        } else {
            std::string word = identifier("#set");
            if (word != "true" && word != "false")
                fail(ErrorCode::MalformedReference, line_, "#set value must be a $reference, string, number or boolean");
            s.value = word == "true";
        }
        expect(')', "#set");
        return s;
    }

    Insert parse_insert() {
        expect('(', "#insert");
        skip_spaces();
        Insert ins;
        if (peek() == '"' || peek() == '\'')
            ins.template_id = quoted_string("#insert");
        else
            ins.template_id = argument_reference("#insert");
        expect(',', "#insert");
        ins.target = argument_reference("#insert");
        expect(')', "#insert");
        return ins;
    }

    std::string_view src_;
    std::string id_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int stop_line_ = 0;
    std::string_view stop_word_;
};

}  // namespace

Template parse_template(std::string_view text, std::string id) {
    return Parser(text, std::move(id)).run();
}

bool Value::truthy() const {
    return std::visit(
        [](const auto& v) -> bool {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return false;
            else if constexpr (std::is_same_v<T, std::string>) return !v.empty();
            else if constexpr (std::is_same_v<T, std::int64_t>) return v != 0;
            else if constexpr (std::is_same_v<T, bool>) return v;
            else if constexpr (std::is_same_v<T, List>) return !v.empty();
            else return v != nullptr;
        },
        data);
}

namespace {

/// `$foreach` inside a loop body.
class LoopStatus final : public Object {
public:
    LoopStatus(std::size_t index, std::size_t size) : index_(index), size_(size) {}

    std::optional<Value> property(std::string_view name) const override {
        if (name == "index") return Value(static_cast<std::int64_t>(index_));
        if (name == "count") return Value(static_cast<std::int64_t>(index_ + 1));
        if (name == "hasNext") return Value(index_ + 1 < size_);
        if (name == "first") return Value(index_ == 0);
        if (name == "last") return Value(index_ + 1 == size_);
        return std::nullopt;
    }
    std::string text() const override { return std::to_string(index_ + 1); }
    std::string_view kind() const override { return "foreach"; }

private:
    std::size_t index_, size_;
};

std::optional<Value> list_property(const List& list, std::string_view name) {
    if (name == "size") return Value(static_cast<std::int64_t>(list.size()));
    if (name == "empty" || name == "isEmpty") return Value(list.empty());
    if (name == "first") return list.empty() ? Value() : list.front();
    if (name == "last") return list.empty() ? Value() : list.back();
    return std::nullopt;
}

constexpr int kMaxInsertDepth = 64;

class Evaluator {
public:
    Evaluator(const Library& library, Mode mode, std::vector<std::string>& warnings)
        : library_(library), mode_(mode), warnings_(warnings) {}

    void render(const Template& tmpl, const Context& roots, std::string& out, int depth) {
        Frame frame{&tmpl, {roots}};
        render_body(frame, tmpl.nodes, out, depth);
    }

private:
    struct Frame {
        const Template* tmpl;
        std::vector<Context> scopes;  // innermost last
    };

    [[noreturn]] void fail(const Frame& f, ErrorCode code, int line, const std::string& msg) const {
        throw Error(code, "template '" + f.tmpl->id + "' line " + std::to_string(line) + ": " + msg,
                    {f.tmpl->id}, line);
    }

    // nullopt: the reference does not resolve
    std::optional<Value> resolve(const Frame& f, const ReferencePath& path) const {
        const Value* root = nullptr;
        for (auto it = f.scopes.rbegin(); it != f.scopes.rend() && !root; ++it) {
            auto found = it->find(path.root);
            if (found != it->end()) root = &found->second;
        }
        if (!root) return std::nullopt;
        Value cur = *root;
        for (const auto& step : path.steps) {
            std::optional<Value> next;
            if (auto* obj = std::get_if<std::shared_ptr<const Object>>(&cur.data))
                next = (*obj)->property(step);
            else if (auto* list = std::get_if<List>(&cur.data))
                next = list_property(*list, step);
            else if (auto* s = std::get_if<std::string>(&cur.data); s && step == "length")
                next = Value(static_cast<std::int64_t>(s->size()));
            if (!next) return std::nullopt;
            cur = std::move(*next);
        }
        return cur;
    }

    bool unresolved(const Frame& f, int line, const std::string& what) {
        if (mode_ == Mode::Strict) fail(f, ErrorCode::UnresolvedReference, line, what);
        warnings_.push_back("template '" + f.tmpl->id + "' line " + std::to_string(line) + ": " + what);
        return false;
    }

    std::string to_text(const Value& v) const {
        return std::visit(
            [this](const auto& x) -> std::string {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, std::monostate>) return {};
                else if constexpr (std::is_same_v<T, std::string>) return x;
                else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
                else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
                else if constexpr (std::is_same_v<T, List>) {
                    std::string out;
                    for (std::size_t i = 0; i < x.size(); ++i) out += (i ? ", " : "") + to_text(x[i]);
                    return out;
                } else return x->text();
            },
            v.data);
    }

    void render_body(Frame& f, const Body& body, std::string& out, int depth) {
        for (const auto& node : body) render_node(f, node, out, depth);
    }

    void render_node(Frame& f, const Node& node, std::string& out, int depth) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Text>) {
                    out += n.text;
                } else if constexpr (std::is_same_v<T, Reference>) {
                    auto v = resolve(f, n.path);
                    if (!v)
                        unresolved(f, node.line, "unresolved reference " + n.path.to_string());
                    else if (v->is_null())
                        unresolved(f, node.line, n.path.to_string() + " is null");
                    else
                        out += to_text(*v);
                } else if constexpr (std::is_same_v<T, Foreach>) {
                    render_foreach(f, n, node.line, out, depth);
                } else if constexpr (std::is_same_v<T, If>) {
                    render_if(f, n, node.line, out, depth);
                } else if constexpr (std::is_same_v<T, Set>) {
                    render_set(f, n, node.line);
                } else {
                    render_insert(f, n, node.line, out, depth);
                }
            },
            node.value);
    }

    void render_foreach(Frame& f, const Foreach& n, int line, std::string& out, int depth) {
        auto v = resolve(f, n.source);
        if (!v) {
            unresolved(f, line, "unresolved reference " + n.source.to_string());
            return;
        }
        if (v->is_null()) return;
        const auto* list = std::get_if<List>(&v->data);
        if (!list) fail(f, ErrorCode::NonIterableInForeach, line, n.source.to_string() + " is not a list");
        for (std::size_t i = 0; i < list->size(); ++i) {
            Context scope;
            scope.emplace(n.variable, (*list)[i]);
            scope.emplace("foreach", Value(std::make_shared<LoopStatus>(i, list->size())));
            f.scopes.push_back(std::move(scope));
            render_body(f, n.body, out, depth);
            f.scopes.pop_back();
        }
    }

    void render_if(Frame& f, const If& n, int line, std::string& out, int depth) {
        auto v = resolve(f, n.condition.path);
        bool holds = false;
        if (v)
            holds = v->truthy();
        else
            unresolved(f, line, "unresolved reference " + n.condition.path.to_string());
        if (n.condition.negated) holds = !holds;
        render_body(f, holds ? n.then_body : n.else_body, out, depth);
    }

    void render_set(Frame& f, const Set& n, int line) {
        Value value;
        if (const auto* path = std::get_if<ReferencePath>(&n.value)) {
            auto v = resolve(f, *path);
            if (!v) {
                unresolved(f, line, "unresolved reference " + path->to_string());
                return;
            }
            value = std::move(*v);
        } else {
            std::visit([&](const auto& lit) {
                using T = std::decay_t<decltype(lit)>;
                if constexpr (!std::is_same_v<T, ReferencePath>) value = Value(lit);
            }, n.value);
        }
        // a loop variable is updated in place; anything else lands in the
        // template's own scope
        for (std::size_t i = f.scopes.size(); i-- > 1;) {
            if (auto found = f.scopes[i].find(n.variable); found != f.scopes[i].end()) {
                found->second = std::move(value);
                return;
            }
        }
        f.scopes.front().insert_or_assign(n.variable, std::move(value));
    }

    void render_insert(Frame& f, const Insert& n, int line, std::string& out, int depth) {
        std::string id;
        if (const auto* lit = std::get_if<std::string>(&n.template_id)) {
            id = *lit;
        } else {
            const auto& path = std::get<ReferencePath>(n.template_id);
            auto v = resolve(f, path);
            if (!v || v->is_null()) {
                unresolved(f, line, "unresolved template id " + path.to_string());
                return;
            }
            id = to_text(*v);
        }
        auto tmpl = library_.find(id);
        if (tmpl == library_.end())
            fail(f, ErrorCode::UnknownTemplateId, line, "no template with id '" + id + "'");

        auto target = resolve(f, n.target);
        if (!target || target->is_null()) {
            unresolved(f, line, "unresolved insert target " + n.target.to_string());
            return;
        }
        const auto* obj = std::get_if<std::shared_ptr<const Object>>(&target->data);
        if (!obj)
            fail(f, ErrorCode::UnresolvedReference, line,
                 n.target.to_string() + " is not a model element and cannot be inserted");
        if (depth >= kMaxInsertDepth)
            fail(f, ErrorCode::UnresolvedReference, line, "#insert nested deeper than " + std::to_string(kMaxInsertDepth));

        // the inserted template sees the outermost roots plus its principal element
        Context roots = f.scopes.front();
        roots.insert_or_assign(std::string((*obj)->kind()), *target);
        render(tmpl->second, roots, out, depth + 1);
    }

    const Library& library_;
    Mode mode_;
    std::vector<std::string>& warnings_;
};

}  // namespace

const Library& Renderer::empty_library() {
    static const Library empty;
    return empty;
}

std::string Renderer::render(const Template& tmpl, const Context& context) {
    std::string out;
    Evaluator(library_, mode_, warnings_).render(tmpl, context, out, 0);
    return out;
}

std::string render(const Template& tmpl, const Context& context, const Library& library) {
    return Renderer(library, Mode::Strict).render(tmpl, context);
}

}  // namespace seqc::tmpl
