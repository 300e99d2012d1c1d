// SPDX-License-Identifier: Apache-2.0
#include "voyager/skills/library.hpp"

#include "voyager/llm/prompts.hpp"
#include "voyager/skillscript/parser.hpp"
#include "voyager/util/hash.hpp"
#include "voyager/util/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

namespace voyager::skills {

namespace fs = std::filesystem;

std::string RetrievalQuery::text() const
{
    if (env_feedback_text.empty())
        return plan_text;
    return plan_text + "\n" + env_feedback_text;
}

SkillLibrary::SkillLibrary(std::shared_ptr<const llm::Embedder> embedder) : embedder_(std::move(embedder))
{
    if (!embedder_)
        throw std::invalid_argument("SkillLibrary needs an embedder");
}

std::string SkillLibrary::free_name(const std::string& base) const
{
    if (!find(base))
        return base;
    for (int v = 2;; ++v) {
        auto candidate = fmt::format("{}V{}", base, v);
        if (!find(candidate))
            return candidate;
    }
}

namespace {

// Renames the function header only; the analyzer rejects self-calls anyway.
std::string rename_header(std::string_view source, const std::string& from, const std::string& to)
{
    std::string s(source);
    auto pos = s.find("fn");
    while (pos != std::string::npos) {
        auto name_at = s.find_first_not_of(" \t\r\n", pos + 2);
        if (name_at != std::string::npos && s.compare(name_at, from.size(), from) == 0) {
            s.replace(name_at, from.size(), to);
            return s;
        }
        pos = s.find("fn", pos + 2);
    }
    return s;
}

} // namespace

const Skill& SkillLibrary::add(std::string_view source, std::string description, int iteration)
{
    if (util::trim(description).empty())
        throw SkillError("skill description must not be empty");
    skillscript::Function fn;
    try {
        fn = skillscript::parse(source);
    } catch (const skillscript::ParseError& e) {
        throw SkillError(fmt::format("skill does not parse: {}", e.what()));
    }
    auto name = free_name(fn.name);
    std::string text(source);
    if (name != fn.name) {
        text = rename_header(source, fn.name, name);
        fn = skillscript::parse(text);
    }
    auto reg = registry();
    auto errors = skillscript::analyze(fn, reg);
    if (!errors.empty()) {
        std::vector<std::string> lines;
        for (const auto& e : errors)
            lines.push_back(skillscript::render(e));
        throw SkillError(fmt::format("skill '{}' rejected:\n{}", name, util::join(lines, "\n")));
    }
    Skill s;
    s.name = name;
    s.embedding = embedder_->embed(description);
    s.description = std::move(description);
    s.source = std::move(text);
    s.created_at_iteration = iteration;
    s.program = std::make_shared<const skillscript::Function>(std::move(fn));
    skills_.push_back(std::move(s));
    return skills_.back();
}

std::vector<Retrieved> SkillLibrary::retrieve_text(std::string_view text, int k) const
{
    if (skills_.empty() || k <= 0)
        return {};
    auto q = embedder_->embed(text);
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < skills_.size(); ++i)
        scored.emplace_back(llm::cosine(q, skills_[i].embedding), i);
    std::stable_sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first)
            return a.first > b.first;
        return skills_[a.second].created_at_iteration < skills_[b.second].created_at_iteration;
    });
    std::vector<Retrieved> out;
    for (std::size_t i = 0; i < scored.size() && static_cast<int>(i) < k; ++i)
        out.push_back({&skills_[scored[i].second], scored[i].first});
    return out;
}

std::vector<Retrieved> SkillLibrary::retrieve(const RetrievalQuery& query) const
{
    if (query.k < 1)
        throw std::invalid_argument("retrieval k must be at least 1");
    return retrieve_text(query.text(), query.k);
}

const Skill* SkillLibrary::find(std::string_view name) const
{
    for (const auto& s : skills_)
        if (s.name == name)
            return &s;
    return nullptr;
}

skillscript::ApiRegistry SkillLibrary::registry() const
{
    auto reg = skillscript::ApiRegistry::standard();
    for (const auto& s : skills_)
        reg.add_skill(s.program, s.description);
    return reg;
}

// manifest: one line per skill in insertion order
//   name <TAB> iteration <TAB> description digest <TAB> embedder id <TAB> dimension <TAB> components
void SkillLibrary::persist(const std::string& dir) const
{
    fs::create_directories(dir);
    std::string manifest = "# voyager skill manifest v1\n";
    for (const auto& s : skills_) {
        util::write_file((fs::path(dir) / (s.name + ".skill")).string(), s.source);
        util::write_file((fs::path(dir) / (s.name + ".desc.txt")).string(), s.description);
        std::vector<std::string> comps;
        comps.reserve(s.embedding.size());
        for (double c : s.embedding)
            comps.push_back(fmt::format("{:.17g}", c));
        manifest += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", s.name, s.created_at_iteration, util::digest(s.description),
                                embedder_->id(), s.embedding.size(), util::join(comps, " "));
    }
    util::write_file((fs::path(dir) / "manifest").string(), manifest);
}

SkillLibrary SkillLibrary::load(const std::string& dir, std::shared_ptr<const llm::Embedder> embedder)
{
    SkillLibrary lib(std::move(embedder));
    auto manifest_path = (fs::path(dir) / "manifest").string();
    if (!fs::exists(manifest_path))
        throw SkillError("no skill manifest at " + manifest_path);
    int line_no = 0;
    for (const auto& line : util::split_lines(util::read_file(manifest_path))) {
        ++line_no;
        if (util::trim(line).empty() || line[0] == '#')
            continue;
        auto fields = util::split(line, '\t');
        auto bad = [&](const std::string& what) {
            auto who = fields.empty() ? std::string("?") : fields[0];
            return SkillError(fmt::format("manifest line {} ('{}'): {}", line_no, who, what));
        };
        if (fields.size() != 6)
            throw bad(fmt::format("expected 6 tab-separated fields, got {}", fields.size()));
        Skill s;
        s.name = fields[0];
        try {
            s.created_at_iteration = std::stoi(fields[1]);
        } catch (const std::exception&) {
            throw bad("bad iteration '" + fields[1] + "'");
        }
        if (fields[3] != lib.embedder_->id())
            throw bad(fmt::format("embedded with '{}', library uses '{}'", fields[3], lib.embedder_->id()));
        std::istringstream comps(fields[5]);
        double c = 0;
        while (comps >> c)
            s.embedding.push_back(c);
        if (std::to_string(s.embedding.size()) != fields[4] || s.embedding.size() != lib.embedder_->dimension())
            throw bad(fmt::format("embedding has {} components, manifest says {}", s.embedding.size(), fields[4]));
        auto skill_path = fs::path(dir) / (s.name + ".skill");
        auto desc_path = fs::path(dir) / (s.name + ".desc.txt");
        if (!fs::exists(skill_path))
            throw bad("missing " + skill_path.string());
        if (!fs::exists(desc_path))
            throw bad("missing " + desc_path.string());
        s.source = util::read_file(skill_path.string());
        s.description = util::read_file(desc_path.string());
        if (util::digest(s.description) != fields[2])
            throw bad("description does not match its digest");
        try {
            auto fn = skillscript::parse(s.source);
            if (fn.name != s.name)
                throw bad(fmt::format("source defines '{}'", fn.name));
            s.program = std::make_shared<const skillscript::Function>(std::move(fn));
        } catch (const skillscript::ParseError& e) {
            throw bad(fmt::format("source does not parse: {}", e.what()));
        }
        if (lib.find(s.name))
            throw bad("duplicate skill name");
        lib.skills_.push_back(std::move(s));
    }
    auto reg = lib.registry();
    for (const auto& s : lib.skills_) {
        auto errors = skillscript::analyze(*s.program, reg);
        if (!errors.empty())
            throw SkillError(fmt::format("skill '{}': {}", s.name, skillscript::render(errors.front())));
    }
    return lib;
}

std::string describe_skill(std::string_view source, llm::Gateway& gateway)
{
    skillscript::parse(source);
    auto request = llm::make_request(llm::Role::describe, llm::prompt_template("describe_system"),
                                     llm::fill(llm::prompt_template("describe_user"), {{"program", std::string(source)}}));
    return gateway.chat(request).text;
}

} // namespace voyager::skills
