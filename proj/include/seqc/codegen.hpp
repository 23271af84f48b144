#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "seqc/dsl.hpp"
#include "seqc/model.hpp"
#include "seqc/template.hpp"

namespace seqc {

struct MainTemplate {
    std::filesystem::path file;
    tmpl::Template body;
    tmpl::Template output_name;  // one-line template giving the file name
};

/// Which templates exist and where generated files go. Action templates are
/// registered under the action-type identifier and component templates under
/// the component type, which is the id `#insert` looks them up by.
struct GeneratorConfig {
    std::string name;
    std::map<std::string, std::filesystem::path> action_templates;
    std::map<std::string, std::filesystem::path> component_templates;
    std::vector<MainTemplate> mains;
    tmpl::Library library;
};

/// Reads a <Generator> document. Relative template paths are looked up under
/// `base_dir` first, then under each of `search_roots`. Throws XmlSyntax,
/// MissingTemplateFile, DuplicateIdentifier or a template parse error.
GeneratorConfig load_generator_config(std::string_view xml_text,
                                      const std::filesystem::path& base_dir,
                                      const std::vector<std::filesystem::path>& search_roots = {});

/// Convenience: reads the config file; its directory is the base directory.
GeneratorConfig load_generator_config_file(const std::filesystem::path& file,
                                           const std::vector<std::filesystem::path>& search_roots = {});

/// Root objects for rendering against a program. The `Program` root exposes
/// name, robotClass, actions (topological order), resources and variables.
tmpl::Context make_context(std::shared_ptr<const Program> program,
                           std::shared_ptr<const RobotClassDsl> dsl);

/// Model element for a single action, usable as a render root.
tmpl::Value action_value(std::shared_ptr<const Program> program,
                         std::shared_ptr<const RobotClassDsl> dsl, std::string_view action);

struct GeneratedFiles {
    std::map<std::string, std::string> files;  // output name -> text
    std::vector<std::string> warnings;         // lenient-mode substitutions
};

/// Renders every main template with the Program root. Throws InvalidProgram
/// when validation reports errors, and render errors otherwise.
GeneratedFiles generate(const Program& program, const RobotClassDsl& dsl,
                        const GeneratorConfig& config, tmpl::Mode mode = tmpl::Mode::Strict);

/// Writes the files under `dir` (created if needed). Without `force`, nothing
/// is written if any target already exists (OutputExists). Returns the paths.
std::vector<std::filesystem::path> write_outputs(const std::map<std::string, std::string>& files,
                                                 const std::filesystem::path& dir, bool force);

}  // namespace seqc
