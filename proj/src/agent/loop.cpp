// SPDX-License-Identifier: Apache-2.0
#include "voyager/agent/loop.hpp"

#include "voyager/llm/prompts.hpp"
#include "voyager/skillscript/parser.hpp"
#include "voyager/util/text.hpp"

#include <fmt/format.h>

#include <filesystem>

namespace voyager::agent {

namespace fs = std::filesystem;

PromptSections sections_for(const AblationConfig& ablation)
{
    PromptSections s;
    s.chat_log = ablation.include_env_feedback;
    s.execution_error = ablation.include_execution_errors;
    s.critique = ablation.use_self_verification;
    return s;
}

std::string_view to_string(EpisodeFinal f)
{
    switch (f) {
    case EpisodeFinal::success: return "success";
    case EpisodeFinal::abandoned: return "abandoned";
    case EpisodeFinal::truncated: return "truncated";
    case EpisodeFinal::aborted: return "aborted";
    }
    return "?";
}

std::string feedback_text(const skillscript::ExecutionOutcome& outcome)
{
    return util::join(outcome.feedback, "\n");
}

llm::ChatRequest assemble_codegen_prompt(const CodegenInputs& in, const PromptSections& sections, int budget)
{
    std::string skills;
    for (const auto* s : in.retrieved)
        skills += fmt::format("```\n{}\n```\n", util::trim(s->source));
    if (!skills.empty())
        skills = "Skills you can call (their code):\n" + skills;
    auto system = llm::fill(llm::prompt_template("codegen_system"),
                            {{"api", skillscript::render_api_docs(skillscript::ApiRegistry::standard())},
                             {"skills", skills},
                             {"budget", std::to_string(budget)}});

    std::string blocks;
    if (const auto* last = in.last_round) {
        if (sections.last_code) {
            if (last->program_source.empty())
                blocks += "Code from the last round: None\n";
            else
                blocks += fmt::format("Code from the last round:\n```\n{}\n```\n", util::trim(last->program_source));
        }
        if (sections.execution_error) {
            const auto& err = last->outcome.error;
            blocks += err ? fmt::format("Execution error:\n{}\n", err->render()) : "Execution error: No error\n";
        }
        if (sections.chat_log) {
            auto log = feedback_text(last->outcome);
            blocks += log.empty() ? "Chat log: None\n" : fmt::format("Chat log:\n{}\n", log);
        }
        if (sections.critique) {
            const auto& c = last->verdict.critique;
            blocks += fmt::format("Critique: {}\n", c.empty() ? "None" : c);
        }
    }
    blocks += render(full_view(in.state)) + "\n";
    auto user = llm::fill(llm::prompt_template("codegen_user"),
                          {{"sections", blocks},
                           {"task", in.task},
                           {"context", in.context.empty() ? "None" : in.context}});
    return llm::make_request(llm::Role::codegen, system, user);
}

Extraction extract_program(std::string_view response)
{
    std::vector<std::string> blocks;
    std::optional<std::string> open;
    for (const auto& line : util::split_lines(response)) {
        auto t = util::trim(line);
        if (t.substr(0, 3) == "```") {
            if (open) {
                blocks.push_back(*open);
                open.reset();
            } else {
                open = std::string();
            }
            continue;
        }
        if (open)
            *open += line + "\n";
    }
    if (open)
        return {std::nullopt, "code block is not closed"};
    if (blocks.empty())
        return {std::nullopt, "no code block in the response"};
    if (blocks.size() > 1)
        return {std::nullopt, fmt::format("ambiguous response: {} code blocks, expected exactly one", blocks.size())};
    try {
        skillscript::parse(blocks.front());
    } catch (const skillscript::ParseError& e) {
        return {std::nullopt, e.what()};
    }
    return {blocks.front(), ""};
}

nlohmann::json state_json(const craftworld::AgentState& s)
{
    nlohmann::json inv = nlohmann::json::object();
    for (const auto& [item, n] : s.inventory)
        if (n > 0)
            inv[item] = n;
    nlohmann::json equip = nlohmann::json::object();
    for (const auto& [slot, item] : s.equipment)
        equip[std::string(craftworld::to_string(slot))] = item;
    return {{"inventory", inv},
            {"equipment", equip},
            {"nearby_blocks", s.nearby_blocks},
            {"nearby_entities", s.nearby_entities},
            {"biome", s.biome},
            {"time", std::string(craftworld::to_string(s.time_of_day))},
            {"health", s.health},
            {"hunger", s.hunger},
            {"position", {s.position.x, s.position.y, s.position.z}}};
}

nlohmann::json round_observation(const craftworld::World& world, std::set<std::string>& seen_items)
{
    std::vector<std::string> fresh;
    for (const auto& item : world.ever_held())
        if (seen_items.insert(item).second)
            fresh.push_back(item);
    auto p = world.position();
    return {{"position", {p.x, p.y, p.z}}, {"biome", world.biome_at(p.x, p.z)}, {"new_items", fresh}};
}

Agent::Agent(craftworld::World& world, llm::Gateway& gateway, skills::SkillLibrary& library,
             curriculum::Curriculum* curriculum, LoopConfig config, EventLog* events, LoopControl* control)
    : world_(world), gateway_(gateway), library_(library), curriculum_(curriculum), config_(std::move(config)),
      events_(events ? events : &own_events_), control_(control ? control : &own_control_)
{
    if (config_.max_rounds < 1)
        throw std::invalid_argument("max_rounds must be at least 1");
    if (!config_.run_dir.empty())
        fs::create_directories(fs::path(config_.run_dir) / "prompts");
    for (const auto& item : world_.ever_held())
        seen_items_.insert(item);
    publish(nullptr, 0);
}

void Agent::emit(nlohmann::json event)
{
    event["driver"] = config_.driver;
    events_->append(std::move(event));
}

void Agent::publish(const curriculum::Task* task, int round)
{
    nlohmann::json snap;
    snap["driver"] = config_.driver;
    snap["iteration"] = iterations_;
    snap["max_iterations"] = config_.max_iterations;
    snap["state"] = state_json(world_.observe());
    snap["task"] = task ? nlohmann::json(task->description) : nlohmann::json(nullptr);
    snap["round"] = round;
    std::vector<std::string> done, failed;
    for (const auto& t : progress_.completed)
        done.push_back(t.description);
    for (const auto& t : progress_.failed)
        failed.push_back(t.description);
    snap["completed"] = done;
    snap["failed"] = failed;
    snap["skills"] = library_.size();
    snap["paused"] = control_->paused();
    snap["verification_pending"] = false;
    control_->publish(std::move(snap));
}

void Agent::save_prompt(const llm::ChatRequest& request)
{
    prompts_.push_back(request.system_prompt + "\n\n" + request.user_prompt);
    if (config_.run_dir.empty())
        return;
    auto path = fs::path(config_.run_dir) / "prompts" / fmt::format("{:04}.txt", iterations_);
    util::write_file(path.string(), prompts_.back());
}

std::string Agent::task_context(const curriculum::Task& task)
{
    if (!config_.task_context)
        return "";
    auto question = fmt::format("How to {}?", util::to_lower(task.description));
    auto request = llm::make_request(
        llm::Role::qa_answer, llm::prompt_template("qa_answer_system"),
        llm::fill(llm::prompt_template("qa_answer_user"), {{"document", ""}, {"question", question}}));
    return std::string(util::trim(gateway_.chat(request).text));
}

verifier::VerificationResult Agent::verify(const curriculum::Task& task, const std::string& context)
{
    if (!config_.human_critic)
        return verifier::self_verify(world_.observe(), task.description, context, gateway_);
    auto snap = control_->snapshot();
    snap["verification_pending"] = true;
    control_->publish(snap);
    emit({{"type", "awaiting_critique"}, {"task", task.description}, {"iteration", iterations_}});
    auto verdict = control_->await_critique();
    if (!verdict)
        throw llm::GatewayError("run stopped while awaiting a critique");
    return *verdict;
}

RoundRecord Agent::run_round(const curriculum::Task& task, const std::string& context, const RoundRecord* last,
                             int round)
{
    if (round > config_.max_rounds)
        throw std::logic_error("episode already used all its rounds");
    CodegenInputs in;
    in.task = task.description;
    in.context = context;
    in.last_round = last;
    in.state = world_.observe();
    std::vector<skills::Retrieved> retrieved;
    if (config_.ablation.use_skill_library) {
        skills::RetrievalQuery q;
        q.plan_text = context.empty() ? task.description : task.description + "\n" + context;
        if (last)
            q.env_feedback_text = feedback_text(last->outcome);
        q.k = config_.retrieval_k;
        retrieved = library_.retrieve(q);
        for (const auto& r : retrieved)
            in.retrieved.push_back(r.skill);
    }
    auto request = assemble_codegen_prompt(in, sections_for(config_.ablation), config_.exec.budget);
    auto response = gateway_.chat(request);
    ++iterations_;
    save_prompt(request);

    RoundRecord rec;
    rec.iteration_index = iterations_;
    rec.round = round;
    rec.prompt_digest = request.digest();
    auto before = in.state;
    auto extracted = extract_program(response.text);
    auto registry = config_.ablation.use_skill_library ? library_.registry() : skillscript::ApiRegistry::standard();
    if (extracted.source) {
        rec.program_source = *extracted.source;
        rec.outcome = skillscript::run_source(rec.program_source, world_, registry, config_.exec);
    } else {
        skillscript::ExecutionError err;
        err.kind = skillscript::ErrorKind::syntax;
        err.message = extracted.error;
        rec.outcome.error = err;
        rec.outcome.end_state = world_.observe();
    }
    rec.rule_check = verifier::rule_check(before, world_.observe(), task.description, world_.registry());

    if (!extracted.source) {
        rec.verdict = {false, "No program was run.", "", true};
    } else if (config_.ablation.use_self_verification) {
        rec.verdict = verify(task, context);
    } else {
        // Without a verifier the only signal left is whether the program ran cleanly.
        bool clean = !rec.outcome.error.has_value();
        rec.verdict = {clean, clean ? "" : "The program failed.", "", true};
    }

    nlohmann::json ev = round_observation(world_, seen_items_);
    ev["type"] = "round";
    ev["iteration"] = rec.iteration_index;
    ev["task"] = task.description;
    ev["round"] = round;
    ev["prompt_digest"] = rec.prompt_digest;
    ev["retrieved"] = [&] {
        std::vector<std::string> names;
        for (const auto& r : retrieved)
            names.push_back(r.skill->name);
        return names;
    }();
    ev["program"] = rec.program_source;
    ev["feedback"] = rec.outcome.feedback;
    ev["error"] = rec.outcome.error ? nlohmann::json(rec.outcome.error->render()) : nlohmann::json(nullptr);
    ev["steps"] = rec.outcome.steps_used;
    ev["success"] = rec.verdict.success;
    ev["critique"] = rec.verdict.critique;
    ev["rule_check"] = rec.rule_check ? nlohmann::json(*rec.rule_check) : nlohmann::json(nullptr);
    ev["inventory"] = state_json(world_.observe())["inventory"];
    emit(std::move(ev));
    publish(&task, round);
    return rec;
}

std::optional<std::string> Agent::commit(const curriculum::Task& task, const RoundRecord& round)
{
    if (!config_.ablation.use_skill_library)
        return std::nullopt;
    auto description = skills::describe_skill(round.program_source, gateway_);
    const auto& skill = library_.add(round.program_source, description, round.iteration_index);
    emit({{"type", "skill"}, {"name", skill.name}, {"task", task.description}, {"iteration", round.iteration_index}});
    if (!config_.run_dir.empty())
        library_.persist((fs::path(config_.run_dir) / "skills").string());
    return skill.name;
}

EpisodeRecord Agent::run_episode(const curriculum::Task& task)
{
    EpisodeRecord ep;
    ep.task = task;
    emit({{"type", "task"}, {"task", task.description}, {"proposer", std::string(curriculum::to_string(task.proposer))},
          {"iteration", iterations_}});
    try {
        auto context = task_context(task);
        bool verified = false;
        for (int round = 1; round <= config_.max_rounds; ++round) {
            if (!budget_left()) {
                ep.final = EpisodeFinal::truncated;
                break;
            }
            if (!control_->wait_if_paused()) {
                ep.final = EpisodeFinal::aborted;
                ep.abort_reason = "stopped";
                break;
            }
            ep.rounds.push_back(run_round(task, context, ep.rounds.empty() ? nullptr : &ep.rounds.back(), round));
            // Without a verifier every episode spends all of its rounds.
            bool stop_early = config_.ablation.use_self_verification || round == config_.max_rounds;
            if (ep.rounds.back().verdict.success && stop_early) {
                verified = true;
                break;
            }
        }
        if (verified) {
            auto committed = commit(task, ep.rounds.back());
            ep.committed_skill = committed;
            ep.final = EpisodeFinal::success;
        } else if (ep.final != EpisodeFinal::truncated && ep.final != EpisodeFinal::aborted) {
            ep.final = EpisodeFinal::abandoned;
        }
    } catch (const llm::GatewayError& e) {
        ep.final = EpisodeFinal::aborted;
        ep.abort_reason = e.what();
    } catch (const skills::SkillError& e) {
        ep.final = EpisodeFinal::aborted;
        ep.abort_reason = e.what();
    }
    if (ep.final == EpisodeFinal::success || ep.final == EpisodeFinal::abandoned)
        progress_.record_outcome(task, ep.final == EpisodeFinal::success);
    nlohmann::json ev = {{"type", "episode"},
                         {"task", task.description},
                         {"final", std::string(to_string(ep.final))},
                         {"rounds", ep.rounds.size()},
                         {"iteration", iterations_}};
    if (ep.committed_skill)
        ev["skill"] = *ep.committed_skill;
    if (!ep.abort_reason.empty())
        ev["reason"] = ep.abort_reason;
    emit(std::move(ev));
    publish(nullptr, 0);
    return ep;
}

RunSummary Agent::run_lifelong()
{
    if (!curriculum_)
        throw std::logic_error("run_lifelong needs a curriculum");
    RunSummary summary;
    emit({{"type", "start"}, {"max_iterations", config_.max_iterations}, {"seed", world_.config().seed}});
    int curriculum_failures = 0;
    while (budget_left()) {
        if (!control_->wait_if_paused()) {
            summary.stop_reason = "stopped";
            break;
        }
        std::optional<curriculum::Task> task;
        try {
            task = curriculum_->next(world_.observe(), progress_);
        } catch (const curriculum::CurriculumError& e) {
            emit({{"type", "curriculum_error"}, {"message", e.what()}, {"iteration", iterations_}});
            if (++curriculum_failures >= config_.max_curriculum_failures) {
                summary.stop_reason = "curriculum keeps failing";
                break;
            }
            continue;
        } catch (const llm::GatewayError& e) {
            emit({{"type", "curriculum_error"}, {"message", e.what()}, {"iteration", iterations_}});
            if (++curriculum_failures >= config_.max_curriculum_failures) {
                summary.stop_reason = "curriculum keeps failing";
                break;
            }
            continue;
        }
        curriculum_failures = 0;
        if (!task) {
            summary.stop_reason = "curriculum exhausted";
            break;
        }
        auto ep = run_episode(*task);
        if (ep.final == EpisodeFinal::truncated)
            summary.truncated = true;
        summary.episodes.push_back(std::move(ep));
    }
    if (summary.stop_reason.empty())
        summary.stop_reason = "iteration cap";
    summary.iterations = iterations_;
    emit({{"type", "end"}, {"iterations", iterations_}, {"reason", summary.stop_reason},
          {"completed", progress_.completed.size()}, {"failed", progress_.failed.size()}});
    return summary;
}

} // namespace voyager::agent
