#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "seqc/error.hpp"
#include "seqc/template.hpp"

using namespace seqc;
using namespace seqc::tmpl;

namespace {

/// A model element with fixed properties.
class Fake final : public Object {
public:
    Fake(std::string kind, std::map<std::string, Value> props, std::string text = "fake")
        : kind_(std::move(kind)), props_(std::move(props)), text_(std::move(text)) {}

    std::optional<Value> property(std::string_view name) const override {
        auto it = props_.find(std::string(name));
        if (it == props_.end()) return std::nullopt;
        return it->second;
    }
    std::string text() const override { return text_; }
    std::string_view kind() const override { return kind_; }

private:
    std::string kind_;
    std::map<std::string, Value> props_;
    std::string text_;
};

Value fake(std::string kind, std::map<std::string, Value> props, std::string text = "fake") {
    return Value(std::shared_ptr<const Object>(std::make_shared<Fake>(std::move(kind), std::move(props), std::move(text))));
}

Value param(const std::string& name, const std::string& var) {
    return fake("Parameter", {{"name", name}, {"variable", fake("Variable", {{"name", var}}, var)}}, var);
}

std::string r(std::string_view text, const Context& ctx, const Library& lib = {}) {
    return render(parse_template(text, "t"), ctx, lib);
}

Error parse_error(std::string_view text) {
    try {
        parse_template(text, "bad.vt");
    } catch (const Error& e) {
        return e;
    }
    FAIL("expected a parse error");
    return Error(ErrorCode::Io, "");
}

Error render_error(std::string_view text, const Context& ctx, const Library& lib = {}) {
    try {
        r(text, ctx, lib);
    } catch (const Error& e) {
        return e;
    }
    FAIL("expected a render error");
    return Error(ErrorCode::Io, "");
}

const char* kMoveManipulator =
    "//Create list of parameters\n"
    "parameters = new List<ParameterVariable>();\n"
    "//fill list of parameters\n"
    "#foreach($Parameter in  $Action.getParameters())\n"
    "//Add previous initialized variables\n"
    "parameters.Add(getVariable(\"$Parameter.getVariable().getName()\"));\n"
    "#end\n"
    "//Create robot specific action\n"
    "ExecutionElement $Action.getName() = \n"
    "\tnew ExecElement(MOVE_MANIPULATOR, parameters));\n";

}  // namespace

TEST_CASE("accessor normalization") {
    CHECK(normalize_accessor("getName") == "name");
    CHECK(normalize_accessor("name") == "name");
    CHECK(normalize_accessor("Name") == "name");
    CHECK(normalize_accessor("getReturnVariable") == "returnVariable");
    CHECK(normalize_accessor("get") == "get");
    CHECK(normalize_accessor("getter") == "getter");

    auto t = parse_template("$A.getName() $A.name() $A.name ${A.Name}");
    std::vector<ReferencePath> paths;
    for (const auto& n : t.nodes)
        if (auto* ref = std::get_if<Reference>(&n.value)) paths.push_back(ref->path);
    REQUIRE(paths.size() == 4);
    for (const auto& p : paths) CHECK(p == ReferencePath{"A", {"name"}});
}

TEST_CASE("parse shapes") {
    auto plain = parse_template("plain text");
    REQUIRE(plain.nodes.size() == 1);
    CHECK(std::get<Text>(plain.nodes[0].value).text == "plain text");

    auto l2 = parse_template(kMoveManipulator, "move_manipulator.vt");
    int foreach_count = 0;
    for (const auto& n : l2.nodes) {
        if (const auto* fe = std::get_if<Foreach>(&n.value)) {
            ++foreach_count;
            CHECK(fe->variable == "Parameter");
            CHECK(fe->source == ReferencePath{"Action", {"parameters"}});
            CHECK(n.line == 4);
            bool has_text = false, has_ref = false;
            for (const auto& b : fe->body) {
                has_text |= std::holds_alternative<Text>(b.value);
                if (auto* ref = std::get_if<Reference>(&b.value)) {
                    has_ref = true;
                    CHECK(ref->path == ReferencePath{"Parameter", {"variable", "name"}});
                }
            }
            CHECK(has_text);
            CHECK(has_ref);
        }
    }
    CHECK(foreach_count == 1);

    auto chain = parse_template("#if($a)1#elseif(!$b)2#else 3#end");
    REQUIRE(chain.nodes.size() == 1);
    const auto& top = std::get<If>(chain.nodes[0].value);
    REQUIRE(top.else_body.size() == 1);
    const auto& nested = std::get<If>(top.else_body[0].value);
    CHECK(nested.condition.negated);
    CHECK(nested.condition.path.root == "b");
}

TEST_CASE("parse errors") {
    CHECK(parse_error("#foreach($x in $y) z").code() == ErrorCode::UnclosedBlock);
    CHECK(parse_error("#if($x) z").code() == ErrorCode::UnclosedBlock);
    CHECK(parse_error("text\n#end\n").code() == ErrorCode::UnclosedBlock);
    CHECK(parse_error("#foreach($x in $y) #else #end").code() == ErrorCode::UnclosedBlock);
    CHECK(parse_error("costs $5").code() == ErrorCode::MalformedReference);
    CHECK(parse_error("${a.b").code() == ErrorCode::MalformedReference);
    CHECK(parse_error("$a.call(1)").code() == ErrorCode::MalformedReference);
    CHECK(parse_error("#foreach($x of $y)#end").code() == ErrorCode::MalformedReference);
    CHECK(parse_error("#set($x = )").code() == ErrorCode::MalformedReference);
    auto e = parse_error("line one\n#include \"x.h\"\n");
    CHECK(e.code() == ErrorCode::UnknownDirective);
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("bad.vt") != std::string::npos);
}

TEST_CASE("substitution") {
    Context ctx{{"Action", fake("Action", {{"name", "A"}})}};
    CHECK(r("$Action.getName()", ctx) == "A");
    CHECK(r("${Action.getName()}Sequence", ctx) == "ASequence");
    CHECK(r("[$Action]", ctx) == "[fake]");
    CHECK(r("$Action.name.length", ctx) == "1");
    CHECK(r("x.$Action.name.", ctx) == "x.A.");
    CHECK(r("C# and 100% #", {}) == "C# and 100% #");
}

TEST_CASE("escapes") {
    CHECK(r("\\$Action \\#foreach \\\\ \\x", {}) == "$Action #foreach \\\\ \\x");

    std::mt19937 rng(11);
    const std::string alphabet = "ab \n;$#";
    for (int round = 0; round < 300; ++round) {
        std::string plain, source;
        int len = rng() % 40;
        for (int i = 0; i < len; ++i) {
            char c = alphabet[rng() % alphabet.size()];
            plain += c;
            if (c == '$' || c == '#') source += '\\';
            source += c;
        }
        CHECK(r(source, {}) == plain);
    }
}

TEST_CASE("foreach") {
    Context ctx{{"Action", fake("Action", {{"name", "MoveMani"},
                                           {"parameters", List{param("targetPose", "targetPose"),
                                                               param("orientation", "orientation")}},
                                           {"none", List{}}})}};
    CHECK(r("#foreach($p in $Action.parameters)$p.name#if($foreach.hasNext), #end#end", ctx) ==
          "targetPose, orientation");
    CHECK(r("#foreach($p in $Action.parameters)$foreach.index/$foreach.count #end", ctx) == "0/1 1/2 ");
    CHECK(r("#foreach($p in $Action.parameters)#if($foreach.last)$p.name#end#end", ctx) == "orientation");
    CHECK(r("before\n#foreach($p in $Action.none)\nbody\n#end\nafter\n", ctx) == "before\nafter\n");
    CHECK(r("$Action.parameters.size $Action.none.empty ${Action.parameters.first.name}", ctx) == "2 true targetPose");

    auto e = render_error("#foreach($c in $Action.name)$c#end", ctx);
    CHECK(e.code() == ErrorCode::NonIterableInForeach);

    // the loop variable does not leak
    CHECK(render_error("#foreach($p in $Action.parameters)#end$p", ctx).code() == ErrorCode::UnresolvedReference);
}

TEST_CASE("directive lines are swallowed") {
    Context ctx{{"xs", Value(List{Value("a"), Value("b")})}};
    CHECK(r("[\n  #foreach($x in $xs)\n  $x\n  #end\n]\n", ctx) == "[\n  a\n  b\n]\n");
    CHECK(r("#foreach($x in $xs) $x #end\n", ctx) == " a  b \n");
    CHECK(r("  #if($xs)yes#end  \n", ctx) == "  yes  \n");
}

TEST_CASE("if, elseif, else") {
    Context ctx{{"yes", Value(true)}, {"no", Value(false)}, {"empty", Value("")}, {"zero", Value(0)},
                {"nothing", Value()}, {"word", Value("w")}};
    CHECK(r("#if($yes)1#else 2#end", ctx) == "1");
    CHECK(r("#if($no)1#else 2#end", ctx) == " 2");
    CHECK(r("#if($no)1#elseif($word)2#else 3#end", ctx) == "2");
    CHECK(r("#if($no)1#elseif($empty)2#elseif(!$zero)3#end", ctx) == "3");
    CHECK(r("#if($nothing)1#end", ctx) == "");
    CHECK(r("#if(!$nothing)1#end", ctx) == "1");
}

TEST_CASE("set") {
    Context ctx{{"xs", Value(List{Value("a"), Value("b"), Value("c")})}};
    CHECK(r("#set($sep = \"\")#foreach($x in $xs)$sep$x#set($sep = \", \")#end", ctx) == "a, b, c");
    CHECK(r("#set($n = 42)$n #set($n = -1)$n #set($b = true)$b", ctx) == "42 -1 true");
    CHECK(r("#set($first = $xs.first)$first", ctx) == "a");
}

TEST_CASE("insert") {
    Library lib;
    lib.emplace("Step", parse_template("<$Action.name in $Program.name>", "Step"));
    lib.emplace("Loop", parse_template("#insert(\"Loop\", $Action)", "Loop"));
    Context ctx{{"Program", fake("Program", {{"name", "P"},
                                             {"actions", List{fake("Action", {{"name", "A"}, {"type", "Step"}}),
                                                              fake("Action", {{"name", "B"}, {"type", "Step"}})}}})}};
    CHECK(r("#foreach($a in $Program.actions)#insert($a.type, $a)#end", ctx, lib) == "<A in P><B in P>");
    CHECK(r("#foreach($a in $Program.actions)\n  #insert(\"Step\", $a)\n#end\n", ctx, lib) == "<A in P><B in P>");
    CHECK(r("#foreach($a in $Program.actions)#insert(\"Step\", $a)\n#end", ctx, lib) == "<A in P>\n<B in P>\n");

    auto unknown = render_error("#foreach($a in $Program.actions)#insert(\"Nope\", $a)#end", ctx, lib);
    CHECK(unknown.code() == ErrorCode::UnknownTemplateId);

    auto deep = render_error("#foreach($a in $Program.actions)#insert(\"Loop\", $a)#end", ctx, lib);
    CHECK(deep.code() == ErrorCode::UnresolvedReference);
}

TEST_CASE("strict and lenient") {
    Context ctx{{"Action", fake("Action", {{"name", "A"}, {"ret", Value()}})}};
    auto t = parse_template("x\n$Action.missing|$Action.ret|$Ghost\n", "frag.vt");

    try {
        render(t, ctx);
        FAIL("expected UnresolvedReference");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnresolvedReference);
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("frag.vt") != std::string::npos);
        CHECK(std::string(e.what()).find("$Action.missing") != std::string::npos);
    }

    Renderer lenient({}, Mode::Lenient);
    CHECK(lenient.render(t, ctx) == "x\n||\n");
    CHECK(lenient.warnings().size() == 3);
}

TEST_CASE("rendering is deterministic") {
    Context ctx{{"xs", Value(List{Value("a"), Value("b")})}};
    auto t = parse_template("#foreach($x in $xs)$x$foreach.count#end");
    CHECK(render(t, ctx) == render(t, ctx));
}

TEST_CASE("substitution matches naive replacement") {
    std::mt19937 rng(3);
    const std::vector<std::string> fillers = {"int ", " = ", ";\n", "foo", " ", "{", "}", ", ", "x1", "<a>", "\t", "'q'", "\"s\"", "-", "+", "a.b "};
    for (int round = 0; round < 300; ++round) {
        std::map<std::string, Value> props;
        std::vector<std::pair<std::string, std::string>> tokens;
        Context ctx;
        for (int i = 0; i < 4; ++i) {
            std::string v = "v" + std::to_string(rng() % 1000);
            props["p" + std::to_string(i)] = Value(v);
        }
        ctx.emplace("Obj", fake("Obj", props));
        ctx.emplace("alpha", Value("ALPHA" + std::to_string(round)));
        ctx.emplace("beta", Value("BETA"));

        std::string source;
        int pieces = 1 + rng() % 12;
        for (int k = 0; k < pieces; ++k) {
            source += fillers[rng() % fillers.size()];
            int i = rng() % 4;
            std::string p = "p" + std::to_string(i);
            switch (rng() % 6) {
                case 0: source += "$alpha "; break;
                case 1: source += "${beta}"; break;
                case 2: source += "$Obj." + p + " "; break;
                case 3: source += "$Obj.get" + std::string(1, 'P') + std::to_string(i) + "() "; break;
                case 4: source += "${Obj." + p + "}"; break;
                default: break;
            }
        }
        for (int i = 0; i < 4; ++i) {
            std::string p = "p" + std::to_string(i);
            std::string v = std::get<std::string>(props[p].data);
            tokens.push_back({"${Obj." + p + "}", v});
            tokens.push_back({"$Obj.getP" + std::to_string(i) + "()", v});
            tokens.push_back({"$Obj." + p, v});
        }
        tokens.push_back({"${beta}", "BETA"});
        tokens.push_back({"$alpha", "ALPHA" + std::to_string(round)});
        CAPTURE(source);
        CHECK(render(parse_template(source), ctx) == oracle::naive_replace(source, tokens));
    }
}
