#include "seqc/codegen.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "seqc/error.hpp"
#include "seqc/validator.hpp"
#include "seqc/xml.hpp"

namespace seqc {

namespace fs = std::filesystem;
using tmpl::List;
using tmpl::Object;
using tmpl::Value;

namespace {

struct Model {
    std::shared_ptr<const Program> program;
    std::shared_ptr<const RobotClassDsl> dsl;
    std::vector<std::string> topo;
};
using ModelPtr = std::shared_ptr<const Model>;

Value variable_value(const ModelPtr& m, const std::string& name);
Value resource_value(const ModelPtr& m, const std::string& name);
Value action_at(const ModelPtr& m, std::size_t index);

template <typename T, typename... Args>
Value object(Args&&... args) {
    return Value(std::shared_ptr<const Object>(std::make_shared<const T>(std::forward<Args>(args)...)));
}

class VariableObject final : public Object {
public:
    VariableObject(ModelPtr m, const VariableDecl& decl) : m_(std::move(m)), decl_(decl) {}

    std::optional<Value> property(std::string_view name) const override {
        if (name == "name") return Value(decl_.name);
        if (name == "type") return Value(decl_.type_name);
        if (name == "init" || name == "initializer")
            return decl_.initializer ? Value(decl_.initializer->to_string()) : Value();
        if (name == "initialized") return Value(decl_.initializer.has_value());
        return std::nullopt;
    }
    std::string text() const override { return decl_.name; }
    std::string_view kind() const override { return "Variable"; }

private:
    ModelPtr m_;
    const VariableDecl& decl_;
};

class ParameterObject final : public Object {
public:
    ParameterObject(ModelPtr m, const TypedName& param, const ArgBinding* arg)
        : m_(std::move(m)), param_(param), arg_(arg) {}

    std::optional<Value> property(std::string_view name) const override {
        if (name == "name") return Value(param_.name);
        if (name == "type") return Value(param_.type_name);
        if (name == "variable") {
            if (!arg_ || !arg_->variable()) return Value();
            return variable_value(m_, *arg_->variable());
        }
        if (name == "value") {
            if (!arg_ || !arg_->literal()) return Value();
            return Value(arg_->literal()->to_string());
        }
        if (name == "bound") return Value(arg_ != nullptr);
        if (name == "binding") return Value(text());
        return std::nullopt;
    }
    std::string text() const override {
        if (!arg_) return {};
        if (const auto* v = arg_->variable()) return *v;
        return arg_->literal()->to_string();
    }
    std::string_view kind() const override { return "Parameter"; }

private:
    ModelPtr m_;
    const TypedName& param_;
    const ArgBinding* arg_;
};

/// `$Action.args.<parameterName>`
class ArgsObject final : public Object {
public:
    ArgsObject(ModelPtr m, const ActionInstance& action, const ActionTypeDef& type)
        : m_(std::move(m)), action_(action), type_(type) {}

    std::optional<Value> property(std::string_view name) const override {
        if (const auto* p = type_.parameter(name))
            return object<ParameterObject>(m_, *p, action_.arg(p->name));
        return std::nullopt;
    }
    std::string text() const override {
        std::string out;
        for (const auto& p : type_.parameters) out += (out.empty() ? "" : ", ") + p.name;
        return out;
    }
    std::string_view kind() const override { return "Args"; }

private:
    ModelPtr m_;
    const ActionInstance& action_;
    const ActionTypeDef& type_;
};

class ActionObject final : public Object {
public:
    ActionObject(ModelPtr m, std::size_t index)
        : m_(std::move(m)),
          action_(m_->program->actions()[index]),
          type_(lookup_action(*m_->dsl, action_.action_type())) {}

    std::optional<Value> property(std::string_view name) const override {
        if (name == "name") return Value(action_.name());
        if (name == "type" || name == "actionType") return Value(action_.action_type());
        if (name == "component") return Value(type_.owner);
        if (name == "resource") return resource_value(m_, action_.resource());
        if (name == "parameters") {
            List out;
            for (const auto& p : type_.parameters)
                out.push_back(object<ParameterObject>(m_, p, action_.arg(p.name)));
            return Value(std::move(out));
        }
        if (name == "args") return object<ArgsObject>(m_, action_, type_);
        if (name == "returnType") return type_.return_type ? Value(*type_.return_type) : Value();
        if (name == "returnVariable")
            return action_.return_variable() ? variable_value(m_, *action_.return_variable()) : Value();
        if (name == "predecessors") {
            List out;
            for (const auto& e : action_.constraints())
                out.push_back(action_at(m_, m_->program->index_of(e.predecessor)));
            return Value(std::move(out));
        }
        if (name == "successors") {
            List out;
            for (const auto& s : successors(*m_->program, action_.name()))
                out.push_back(action_at(m_, m_->program->index_of(s)));
            return Value(std::move(out));
        }
        return std::nullopt;
    }
    std::string text() const override { return action_.name(); }
    std::string_view kind() const override { return "Action"; }

private:
    ModelPtr m_;
    const ActionInstance& action_;
    const ActionTypeDef& type_;
};

class ResourceObject final : public Object {
public:
    ResourceObject(ModelPtr m, const ResourceInstance& res) : m_(std::move(m)), res_(res) {}

    std::optional<Value> property(std::string_view name) const override {
        if (name == "name") return Value(res_.name);
        if (name == "type" || name == "componentType") return Value(res_.component_type);
        if (name == "actions") {
            List out;
            for (const auto& n : m_->topo) {
                std::size_t i = m_->program->index_of(n);
                if (m_->program->actions()[i].resource() == res_.name) out.push_back(action_at(m_, i));
            }
            return Value(std::move(out));
        }
        return std::nullopt;
    }
    std::string text() const override { return res_.name; }
    std::string_view kind() const override { return "ResourceComponent"; }

private:
    ModelPtr m_;
    const ResourceInstance& res_;
};

class ProgramObject final : public Object {
public:
    explicit ProgramObject(ModelPtr m) : m_(std::move(m)) {}

    std::optional<Value> property(std::string_view name) const override {
        const Program& p = *m_->program;
        if (name == "name") return Value(p.name());
        if (name == "robotClass") return Value(p.robot_class());
        if (name == "actions") {
            List out;
            for (const auto& n : m_->topo) out.push_back(action_at(m_, p.index_of(n)));
            return Value(std::move(out));
        }
        if (name == "resources") {
            List out;
            for (const auto& r : p.resources()) out.push_back(object<ResourceObject>(m_, r));
            return Value(std::move(out));
        }
        if (name == "variables") {
            List out;
            for (const auto& v : p.variables()) out.push_back(object<VariableObject>(m_, v));
            return Value(std::move(out));
        }
        return std::nullopt;
    }
    std::string text() const override { return m_->program->name(); }
    std::string_view kind() const override { return "Program"; }

private:
    ModelPtr m_;
};

Value variable_value(const ModelPtr& m, const std::string& name) {
    const auto* decl = m->program->find_variable(name);
    return decl ? object<VariableObject>(m, *decl) : Value();
}

Value resource_value(const ModelPtr& m, const std::string& name) {
    const auto* res = m->program->find_resource(name);
    return res ? object<ResourceObject>(m, *res) : Value();
}

Value action_at(const ModelPtr& m, std::size_t index) { return object<ActionObject>(m, index); }

ModelPtr make_model(std::shared_ptr<const Program> program, std::shared_ptr<const RobotClassDsl> dsl) {
    auto topo = topological_order(*program);
    return std::make_shared<const Model>(Model{std::move(program), std::move(dsl), std::move(topo)});
}

template <typename T>
std::shared_ptr<const T> borrow(const T& value) {
    return std::shared_ptr<const T>(&value, [](const T*) {});
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

tmpl::Context make_context(std::shared_ptr<const Program> program,
                           std::shared_ptr<const RobotClassDsl> dsl) {
    tmpl::Context ctx;
    ctx.emplace("Program", object<ProgramObject>(make_model(std::move(program), std::move(dsl))));
    return ctx;
}

tmpl::Value action_value(std::shared_ptr<const Program> program,
                         std::shared_ptr<const RobotClassDsl> dsl, std::string_view action) {
    std::size_t index = program->index_of(action);
    return action_at(make_model(std::move(program), std::move(dsl)), index);
}

GeneratorConfig load_generator_config(std::string_view xml_text, const fs::path& base_dir,
                                      const std::vector<fs::path>& search_roots) {
    xml::Element root = xml::parse(xml_text);
    if (root.name != "Generator")
        throw Error(ErrorCode::XmlSyntax,
                    "line " + std::to_string(root.line) + ": expected <Generator> root, found <" +
                        root.name + ">",
                    {root.name}, root.line);
    root.expect_children({"ActionTemplate", "ComponentTemplate", "Main"});

    GeneratorConfig config;
    config.name = root.attr("name").value_or("");

    auto locate = [&](const xml::Element& el) {
        fs::path file = el.required_attr("file");
        std::vector<fs::path> candidates;
        if (file.is_absolute()) {
            candidates.push_back(file);
        } else {
            candidates.push_back(base_dir / file);
            for (const auto& r : search_roots) candidates.push_back(r / file);
        }
        for (const auto& c : candidates)
            if (fs::is_regular_file(c)) return c;
        throw Error(ErrorCode::MissingTemplateFile,
                    "line " + std::to_string(el.line) + ": template file '" + file.string() +
                        "' not found",
                    {file.string()}, el.line);
    };

    auto add_library = [&](const xml::Element& el, const std::string& id, const fs::path& file) {
        if (config.library.count(id))
            throw Error(ErrorCode::DuplicateIdentifier,
                        "line " + std::to_string(el.line) + ": template id '" + id + "' is configured twice",
                        {id}, el.line);
        config.library.emplace(id, tmpl::parse_template(read_file(file), id));
    };

    for (const auto& el : root.children) {
        if (el.name == "ActionTemplate") {
            std::string id = el.required_attr("actionType");
            fs::path file = locate(el);
            add_library(el, id, file);
            config.action_templates.emplace(id, file);
        } else if (el.name == "ComponentTemplate") {
            std::string id = el.required_attr("componentType");
            fs::path file = locate(el);
            add_library(el, id, file);
            config.component_templates.emplace(id, file);
        } else {
            fs::path file = locate(el);
            std::string pattern = el.required_attr("output");
            if (pattern.find('\n') != std::string::npos || pattern.empty())
                throw Error(ErrorCode::XmlSyntax,
                            "line " + std::to_string(el.line) + ": output name must be a single non-empty line",
                            {}, el.line);
            config.mains.push_back(MainTemplate{
                file, tmpl::parse_template(read_file(file), file.filename().string()),
                tmpl::parse_template(pattern, "output name of " + file.filename().string())});
        }
    }
    return config;
}

GeneratorConfig load_generator_config_file(const fs::path& file, const std::vector<fs::path>& search_roots) {
    return load_generator_config(read_file(file), file.parent_path(), search_roots);
}

GeneratedFiles generate(const Program& program, const RobotClassDsl& dsl, const GeneratorConfig& config,
                        tmpl::Mode mode) {
    auto report = validate(program, dsl);
    if (!report.ok)
        throw Error(ErrorCode::InvalidProgram,
                    "program '" + program.name() + "' has " +
                        std::to_string(report.count(Severity::Error)) +
                        " validation error(s); code generation refused");

    auto ctx = make_context(borrow(program), borrow(dsl));
    tmpl::Renderer renderer(config.library, mode);
    GeneratedFiles out;
    for (const auto& main : config.mains) {
        std::string name = renderer.render(main.output_name, ctx);
        fs::path rel(name);
        if (name.empty() || rel.is_absolute() || rel.has_root_name() ||
            std::any_of(rel.begin(), rel.end(), [](const fs::path& part) { return part == ".."; }))
            throw Error(ErrorCode::Io, "output name '" + name + "' from " + main.file.filename().string() +
                                           " must be a relative path inside the output directory");
        if (out.files.count(name))
            throw Error(ErrorCode::DuplicateIdentifier, "two main templates produce '" + name + "'", {name});
        out.files.emplace(name, renderer.render(main.body, ctx));
    }
    out.warnings = renderer.warnings();
    return out;
}

std::vector<fs::path> write_outputs(const std::map<std::string, std::string>& files, const fs::path& dir,
                                    bool force) {
    std::vector<fs::path> targets;
    for (const auto& [name, text] : files) targets.push_back(dir / name);
    if (!force) {
        for (const auto& t : targets)
            if (fs::exists(t))
                throw Error(ErrorCode::OutputExists,
                            "'" + t.string() + "' already exists (use --force to overwrite)", {t.string()});
    }
    std::size_t i = 0;
    for (const auto& [name, text] : files) {
        const auto& target = targets[i++];
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        std::ofstream out(target, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot write '" + target.string() + "'");
        out << text;
    }
    return targets;
}

}  // namespace seqc
