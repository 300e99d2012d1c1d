// SPDX-License-Identifier: Apache-2.0
#include "voyager/curriculum/curriculum.hpp"

#include "voyager/craftworld/registry.hpp"
#include "voyager/llm/prompts.hpp"
#include "voyager/util/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <filesystem>

namespace voyager::curriculum {

std::string_view to_string(Proposer p)
{
    switch (p) {
    case Proposer::automatic: return "auto";
    case Proposer::manual: return "manual";
    case Proposer::random: return "random";
    case Proposer::human: return "human";
    }
    return "?";
}

std::optional<Proposer> parse_proposer(std::string_view text)
{
    for (auto p : {Proposer::automatic, Proposer::manual, Proposer::random, Proposer::human})
        if (to_string(p) == text)
            return p;
    if (text == "automatic")
        return Proposer::automatic;
    return std::nullopt;
}

std::string task_id(std::string_view description)
{
    auto words = util::split_ws(util::to_lower(description));
    return util::join(words, " ");
}

Task make_task(std::string description, Proposer proposer)
{
    Task t;
    t.id = task_id(description);
    t.description = std::move(description);
    t.proposer = proposer;
    return t;
}

void Progress::record_outcome(const Task& task, bool success)
{
    auto it = std::find_if(failed.begin(), failed.end(), [&](const Task& t) { return t.id == task.id; });
    int prior = it == failed.end() ? 0 : it->attempts;
    if (it != failed.end())
        failed.erase(it);
    Task entry = task;
    entry.attempts = std::max(task.attempts, prior) + 1;
    auto done = std::find_if(completed.begin(), completed.end(), [&](const Task& t) { return t.id == task.id; });
    if (done != completed.end()) {
        // Already learned; a repeat only bumps the count.
        done->attempts = std::max(done->attempts, entry.attempts);
        return;
    }
    if (success)
        completed.push_back(std::move(entry));
    else
        failed.push_back(std::move(entry));
}

const Task* Progress::find_failed(std::string_view id) const
{
    for (const auto& t : failed)
        if (t.id == id)
            return &t;
    return nullptr;
}

std::string_view to_string(Field f)
{
    switch (f) {
    case Field::core_inventory: return "core_inventory";
    case Field::equipment: return "equipment";
    case Field::nearby_blocks: return "nearby_blocks";
    case Field::position: return "position";
    case Field::nearby_entities: return "nearby_entities";
    case Field::full_inventory: return "full_inventory";
    case Field::recently_seen_blocks: return "recently_seen_blocks";
    case Field::biome: return "biome";
    case Field::health: return "health";
    case Field::hunger: return "hunger";
    case Field::time: return "time";
    case Field::additional_context: return "additional_context";
    }
    return "?";
}

WarmupSchedule WarmupSchedule::standard()
{
    WarmupSchedule s;
    s.thresholds = {{Field::core_inventory, 0},       {Field::equipment, 0},  {Field::nearby_blocks, 0},
                    {Field::position, 0},             {Field::nearby_entities, 5}, {Field::full_inventory, 7},
                    {Field::recently_seen_blocks, 10}, {Field::biome, 10},     {Field::health, 15},
                    {Field::hunger, 15},              {Field::time, 15},      {Field::additional_context, 15}};
    s.core_items = {"log", "planks", "stick", "crafting_table", "furnace", "dirt", "coal", "pickaxe", "sword", "axe"};
    return s;
}

bool WarmupSchedule::unlocked(Field f, std::size_t num_completed) const
{
    auto it = thresholds.find(f);
    return it != thresholds.end() && static_cast<std::size_t>(it->second) <= num_completed;
}

void WarmupSchedule::validate() const
{
    for (const auto& [f, t] : thresholds)
        if (t < 0)
            throw std::invalid_argument(fmt::format("warm-up threshold for {} is negative", to_string(f)));
    auto core = thresholds.find(Field::core_inventory);
    auto full = thresholds.find(Field::full_inventory);
    if (core != thresholds.end() && full != thresholds.end() && core->second > full->second)
        throw std::invalid_argument("core inventory must unlock no later than the full inventory");
}

bool is_core_item(std::string_view item, const std::vector<std::string>& whitelist)
{
    return std::any_of(whitelist.begin(), whitelist.end(),
                       [&](const std::string& w) { return item.find(w) != std::string_view::npos; });
}

agent::StateView warmup_filter(const craftworld::AgentState& state, std::size_t n, const WarmupSchedule& schedule)
{
    agent::StateView v;
    if (schedule.unlocked(Field::full_inventory, n)) {
        v.inventory = state.inventory;
        v.chests = state.known_chests;
    } else if (schedule.unlocked(Field::core_inventory, n)) {
        craftworld::Inventory core;
        for (const auto& [item, count] : state.inventory)
            if (is_core_item(item, schedule.core_items))
                core[item] = count;
        v.inventory = std::move(core);
        v.core_inventory_only = true;
    }
    if (schedule.unlocked(Field::equipment, n))
        v.equipment = state.equipment;
    if (schedule.unlocked(Field::nearby_blocks, n))
        v.nearby_blocks = state.nearby_blocks;
    if (schedule.unlocked(Field::position, n))
        v.position = state.position;
    if (schedule.unlocked(Field::nearby_entities, n))
        v.nearby_entities = state.nearby_entities;
    if (schedule.unlocked(Field::recently_seen_blocks, n))
        v.recently_seen_blocks = state.recently_seen_blocks;
    if (schedule.unlocked(Field::biome, n))
        v.biome = state.biome;
    if (schedule.unlocked(Field::health, n))
        v.health = state.health;
    if (schedule.unlocked(Field::hunger, n))
        v.hunger = state.hunger;
    if (schedule.unlocked(Field::time, n))
        v.time = state.time_of_day;
    return v;
}

// ---- QA context ----

void DocStore::add(std::string topic, std::string text) { docs_[util::to_lower(util::trim(topic))] = std::move(text); }

std::optional<std::string> DocStore::find(std::string_view topic) const
{
    auto it = docs_.find(util::to_lower(util::trim(topic)));
    if (it == docs_.end())
        return std::nullopt;
    return it->second;
}

DocStore DocStore::load_dir(const std::string& dir)
{
    DocStore store;
    if (!std::filesystem::is_directory(dir))
        return store;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".txt")
            store.add(util::replace_all(entry.path().stem().string(), "_", " "),
                      util::read_file(entry.path().string()));
    return store;
}

namespace {

// "Question 1: text" -> text; also accepts "Question: text".
std::optional<std::string> labelled(std::string_view line, std::string_view label)
{
    line = util::trim(line);
    if (line.size() < label.size() || !util::iequals(line.substr(0, label.size()), label))
        return std::nullopt;
    auto colon = line.find(':');
    if (colon == std::string_view::npos)
        return std::nullopt;
    auto between = util::trim(line.substr(label.size(), colon - label.size()));
    if (!std::all_of(between.begin(), between.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return std::nullopt;
    return std::string(util::trim(line.substr(colon + 1)));
}

std::string task_list(const std::vector<Task>& tasks)
{
    if (tasks.empty())
        return "None";
    std::vector<std::string> d;
    for (const auto& t : tasks)
        d.push_back(t.description);
    return util::join(d, ", ");
}

} // namespace

std::vector<std::pair<std::string, std::string>> parse_questions(std::string_view text)
{
    std::vector<std::pair<std::string, std::string>> out;
    std::optional<std::string> pending;
    for (const auto& line : util::split_lines(text)) {
        if (auto q = labelled(line, "Question")) {
            pending = *q;
        } else if (auto c = labelled(line, "Concept"); c && pending) {
            if (!pending->empty() && !c->empty())
                out.emplace_back(*pending, *c);
            pending.reset();
        }
    }
    return out;
}

std::vector<QaPair> gather_context(const agent::StateView& view, const Progress& progress, llm::Gateway& gateway,
                                   const DocStore* docs, int count, std::vector<std::string>* warnings)
{
    std::vector<QaPair> out;
    try {
        auto ask = llm::make_request(
            llm::Role::qa_ask, llm::fill(llm::prompt_template("qa_ask_system"), {{"count", std::to_string(count)}}),
            llm::fill(llm::prompt_template("qa_ask_user"), {{"state", agent::render(view)},
                                                           {"completed", task_list(progress.completed)},
                                                           {"failed", task_list(progress.failed)}}));
        auto questions = parse_questions(gateway.chat(ask).text);
        if (static_cast<int>(questions.size()) > count)
            questions.resize(static_cast<std::size_t>(count));
        for (auto& [question, topic] : questions) {
            std::string document;
            if (docs)
                if (auto doc = docs->find(topic))
                    document = fmt::format("Reference document about {}:\n{}\n\n", topic, *doc);
            auto answer = llm::make_request(
                llm::Role::qa_answer, llm::prompt_template("qa_answer_system"),
                llm::fill(llm::prompt_template("qa_answer_user"), {{"document", document}, {"question", question}}));
            out.push_back({question, topic, std::string(util::trim(gateway.chat(answer).text))});
        }
    } catch (const llm::GatewayError& e) {
        if (warnings)
            warnings->push_back(fmt::format("context skipped: {}", e.what()));
        return {};
    }
    return out;
}

std::string render_context(const std::vector<QaPair>& pairs)
{
    std::string out;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        out += fmt::format("Question {}: {}\nAnswer: {}\n", i + 1, pairs[i].question, pairs[i].answer);
    return out;
}

// ---- proposal ----

std::optional<std::string> parse_task_line(std::string_view response)
{
    std::optional<std::string> found;
    for (const auto& line : util::split_lines(response)) {
        auto t = util::trim(line);
        if (t.size() >= 5 && util::iequals(t.substr(0, 5), "task:")) {
            auto rest = std::string(util::trim(t.substr(5)));
            while (!rest.empty() && (rest.back() == '.' || rest.back() == '"'))
                rest.pop_back();
            if (!rest.empty() && rest.front() == '"')
                rest.erase(0, 1);
            found = rest.empty() ? std::nullopt : std::optional<std::string>(rest);
        }
    }
    return found;
}

std::string curriculum_user_prompt(const agent::StateView& view, const Progress& progress,
                                   const std::vector<QaPair>& context)
{
    return llm::fill(llm::prompt_template("curriculum_user"), {{"state", agent::render(view)},
                                                               {"completed", task_list(progress.completed)},
                                                               {"failed", task_list(progress.failed)},
                                                               {"context", render_context(context)}});
}

Task propose_next_task(const agent::StateView& view, const Progress& progress, const std::vector<QaPair>& context,
                       llm::Gateway& gateway)
{
    auto system = llm::prompt_template("curriculum_system");
    auto user = curriculum_user_prompt(view, progress, context);
    auto first = gateway.chat(llm::make_request(llm::Role::curriculum, system, user));
    auto text = first.text;
    auto task = parse_task_line(text);
    if (!task) {
        auto second = gateway.chat(llm::make_request(
            llm::Role::curriculum, system,
            user + "\n" + llm::prompt_template("curriculum_reprompt")));
        text = second.text;
        task = parse_task_line(text);
    }
    if (!task)
        throw CurriculumError("curriculum response has no 'Task:' line after a reprompt");
    auto t = make_task(*task, Proposer::automatic);
    auto cut = text.rfind("Task:");
    t.reasoning = std::string(util::trim(std::string_view(text).substr(0, cut == std::string::npos ? 0 : cut)));
    return t;
}

std::size_t fit_to_budget(agent::StateView& view, Progress& progress, const std::vector<QaPair>& context,
                          std::size_t budget_tokens)
{
    auto system = llm::prompt_template("curriculum_system");
    auto over = [&] {
        return util::estimate_tokens(system) + util::estimate_tokens(curriculum_user_prompt(view, progress, context)) >
               budget_tokens;
    };
    std::size_t dropped = 0;
    while (over() && !progress.completed.empty()) {
        progress.completed.erase(progress.completed.begin());
        ++dropped;
    }
    if (over())
        view.recently_seen_blocks.reset();
    return dropped;
}

// ---- manual and random ----

std::vector<std::string> load_task_list(const std::string& path)
{
    std::vector<std::string> out;
    for (const auto& line : util::split_lines(util::read_file(path))) {
        auto t = util::trim(line);
        if (!t.empty() && t[0] != '#')
            out.emplace_back(t);
    }
    return out;
}

std::vector<std::string> manual_tasks() { return load_task_list(craftworld::data_path("curriculum/manual.txt")); }
std::vector<std::string> random_pool() { return load_task_list(craftworld::data_path("curriculum/random_pool.txt")); }

std::string obtain_task(std::string_view item) { return fmt::format("Obtain 1 {}", item); }

RandomCurriculum::RandomCurriculum(std::vector<std::string> pool, std::uint64_t seed)
    : pool_(std::move(pool)), rng_(seed)
{
}

Task RandomCurriculum::next()
{
    if (pool_.empty())
        throw CurriculumError("random curriculum pool is empty");
    std::uniform_int_distribution<std::size_t> pick(0, pool_.size() - 1);
    return make_task(obtain_task(pool_[pick(rng_)]), Proposer::random);
}

Curriculum::Curriculum(CurriculumConfig config, llm::Gateway* gateway, const DocStore* docs)
    : config_(std::move(config)), gateway_(gateway), docs_(docs), random_(config_.pool, config_.seed)
{
    config_.schedule.validate();
    if (config_.mode == Proposer::automatic && !gateway_)
        throw std::invalid_argument("automatic curriculum needs a gateway");
}

std::optional<Task> Curriculum::next(const craftworld::AgentState& state, const Progress& progress)
{
    switch (config_.mode) {
    case Proposer::manual:
        for (const auto& d : config_.manual) {
            auto id = task_id(d);
            bool done = std::any_of(progress.completed.begin(), progress.completed.end(),
                                    [&](const Task& t) { return t.id == id; });
            if (!done) {
                auto t = make_task(d, Proposer::manual);
                if (const auto* f = progress.find_failed(id))
                    t.attempts = f->attempts;
                return t;
            }
        }
        return std::nullopt;
    case Proposer::random: return random_.next();
    case Proposer::human: {
        auto d = human_.pop();
        if (!d)
            return std::nullopt;
        return make_task(*d, Proposer::human);
    }
    case Proposer::automatic: break;
    }
    auto n = progress.num_completed();
    auto view = warmup_filter(state, n, config_.schedule);
    last_context_.clear();
    if (config_.schedule.unlocked(Field::additional_context, n))
        last_context_ = gather_context(view, progress, *gateway_, docs_, config_.qa_count, &warnings_);
    auto shown = progress;
    if (config_.context_budget_tokens > 0)
        fit_to_budget(view, shown, last_context_, config_.context_budget_tokens);
    auto t = propose_next_task(view, shown, last_context_, *gateway_);
    if (const auto* f = progress.find_failed(t.id))
        t.attempts = f->attempts;
    return t;
}

} // namespace voyager::curriculum
