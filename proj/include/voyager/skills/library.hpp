// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voyager/llm/gateway.hpp"
#include "voyager/skillscript/analyzer.hpp"
#include "voyager/skillscript/ast.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace voyager::skills {

struct Skill {
    std::string name;
    std::string description;
    llm::Embedding embedding;
    std::string source;
    int created_at_iteration = 0;
    std::shared_ptr<const skillscript::Function> program;
};

struct RetrievalQuery {
    std::string plan_text;
    std::string env_feedback_text;
    int k = 5;

    std::string text() const;
};

struct Retrieved {
    const Skill* skill = nullptr;
    double similarity = 0.0;
};

class SkillError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Append-only store of verified skills, indexed by the embedding of their description.
class SkillLibrary {
public:
    explicit SkillLibrary(std::shared_ptr<const llm::Embedder> embedder);

    /// Parses and analyzes against the current library. A taken name is suffixed V2, V3, ...
    /// Throws SkillError listing the static errors.
    const Skill& add(std::string_view source, std::string description, int iteration = 0);

    /// Descending cosine similarity; ties keep the older skill first.
    std::vector<Retrieved> retrieve(const RetrievalQuery& query) const;
    std::vector<Retrieved> retrieve_text(std::string_view text, int k = 5) const;

    const Skill* find(std::string_view name) const;
    const std::vector<Skill>& skills() const { return skills_; }
    std::size_t size() const { return skills_.size(); }
    bool empty() const { return skills_.empty(); }
    const llm::Embedder& embedder() const { return *embedder_; }

    /// Standard primitives and queries plus every stored skill.
    skillscript::ApiRegistry registry() const;

    /// Writes <dir>/<name>.skill, <dir>/<name>.desc.txt and <dir>/manifest.
    void persist(const std::string& dir) const;
    /// Throws SkillError naming the bad entry.
    static SkillLibrary load(const std::string& dir, std::shared_ptr<const llm::Embedder> embedder);

private:
    std::string free_name(const std::string& base) const;

    std::shared_ptr<const llm::Embedder> embedder_;
    std::vector<Skill> skills_;
};

/// One-paragraph description from the auxiliary model.
std::string describe_skill(std::string_view source, llm::Gateway& gateway);

} // namespace voyager::skills
