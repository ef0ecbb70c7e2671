#include "graspsim/learner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

namespace graspsim {

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
    if (i > j) std::swap(i, j);
    // Rows 0..i-1 hold n-1, n-2, ... entries.
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

std::pair<std::size_t, std::size_t> pair_from_index(std::size_t k, std::size_t n) {
    std::size_t i = 0;
    while (k >= n - 1 - i) {
        k -= n - 1 - i;
        ++i;
    }
    return {i, i + 1 + k};
}

namespace {

std::size_t first_argmax(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

}  // namespace

ActionChoice select_action(const QBundle& b) {
    if (b.q_e.empty() || b.q_s.size() != b.q_e.size()) throw LearnerError("select_action: malformed bundle");
    const std::size_t ne = first_argmax(b.q_e);
    const std::size_t ns = first_argmax(b.q_s);
    const double qe = b.q_e[ne];
    const double qs = b.q_s[ns];

    if (b.size() == 1 || !b.has_pairs()) {
        if (qe >= std::max(qe, qs)) return {qe, ActionKind::enveloping, ne, ne};
        return {qs, ActionKind::sucking, ns, ns};
    }

    const std::size_t kes = first_argmax(b.q_es);
    const double qes = b.q_es[kes];
    const auto [i, j] = pair_from_index(kes, b.size());
    const double top = std::max({qe, qs, qes});
    if (qe >= top) return {qe, ActionKind::enveloping, ne, ne};
    if (qs >= top) return {qs, ActionKind::sucking, ns, ns};
    // The pair member that is better to envelope is enveloped.
    if (b.q_e[i] >= b.q_e[j]) return {qes, ActionKind::enveloping_then_sucking, i, j};
    return {qes, ActionKind::enveloping_then_sucking, j, i};
}

double q_of(const QBundle& b, const ActionChoice& a) {
    switch (a.kind) {
        case ActionKind::enveloping: return b.q_e.at(a.first);
        case ActionKind::sucking: return b.q_s.at(a.first);
        case ActionKind::enveloping_then_sucking: return b.q_es.at(pair_index(a.first, a.second, b.size()));
    }
    return 0.0;
}

double td_target(double reward, bool terminal, const QBundle& next_online, const QBundle& next_target,
                 double gamma) {
    if (terminal || next_online.q_e.empty()) return reward;
    const ActionChoice best = select_action(next_online);
    return reward + gamma * q_of(next_target, best);
}

// ---------------------------------------------------------------------------

std::vector<double> EncodedState::single_input(std::size_t i) const {
    std::vector<double> in(2 * kFeatureCells);
    std::copy(objects.at(i).begin(), objects[i].end(), in.begin());
    std::copy(global.begin(), global.end(), in.begin() + kFeatureCells);
    return in;
}

std::vector<double> EncodedState::pair_input(std::size_t envelope, std::size_t suck) const {
    std::vector<double> in(2 * kFeatureCells);
    const FeatureMap& a = objects.at(envelope);
    const FeatureMap& b = objects.at(suck);
    constexpr int half = kFeatureSide / 2;
    for (int y = 0; y < kFeatureSide; ++y)
        for (int x = 0; x < half; ++x) {
            const auto src = static_cast<std::size_t>(y * kFeatureSide + 2 * x);
            in[static_cast<std::size_t>(y * kFeatureSide + x)] = std::max(a[src], a[src + 1]);
            in[static_cast<std::size_t>(y * kFeatureSide + half + x)] = std::max(b[src], b[src + 1]);
        }
    std::copy(global.begin(), global.end(), in.begin() + kFeatureCells);
    return in;
}

EncodedState encode_state(const StateViews& views) {
    const int res = views.depth.resolution;
    if (res < kFeatureSide) throw LearnerError("encode_state: heightmap coarser than the feature grid");
    auto cell_of = [res](int ix) { return ix * kFeatureSide / res; };

    EncodedState s;
    s.global.fill(0.0);
    for (int iy = 0; iy < res; ++iy)
        for (int ix = 0; ix < res; ++ix) {
            double& c = s.global[static_cast<std::size_t>(cell_of(iy) * kFeatureSide + cell_of(ix))];
            c = std::max(c, views.depth.at(ix, iy) / kHeightScale);
        }

    const double cell = kLocalSide / kFeatureSide;
    s.objects.resize(views.masks.size());
    for (std::size_t o = 0; o < views.masks.size(); ++o) {
        FeatureMap& f = s.objects[o];
        f.fill(0.0);
        const Mask& m = views.masks[o];
        const Vec2 center = views.descriptors.at(o).box.center;
        for (int iy = 0; iy < res; ++iy)
            for (int ix = 0; ix < res; ++ix) {
                if (!m.at(ix, iy)) continue;
                const Vec2 d = views.depth.cell_center(ix, iy) - center;
                const int cx = static_cast<int>(std::floor((d.x() + kLocalSide / 2) / cell));
                const int cy = static_cast<int>(std::floor((d.y() + kLocalSide / 2) / cell));
                if (cx < 0 || cy < 0 || cx >= kFeatureSide || cy >= kFeatureSide) continue;
                double& c = f[static_cast<std::size_t>(cy * kFeatureSide + cx)];
                c = std::max(c, views.depth.at(ix, iy) / kHeightScale);
            }
    }
    return s;
}

// ---------------------------------------------------------------------------

QNetworks QNetworks::make(bool with_pair, int hidden, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::vector<int> arch{2 * kFeatureCells, hidden, hidden, 1};
    QNetworks n{nn::Mlp(arch), nn::Mlp(arch), std::nullopt};
    n.envelope.kaiming_init(rng);
    n.suck.kaiming_init(rng);
    if (with_pair) {
        n.pair = nn::Mlp(arch);
        n.pair->kaiming_init(rng);
    }
    return n;
}

bool QNetworks::same_architecture(const QNetworks& o) const {
    if (pair.has_value() != o.pair.has_value()) return false;
    if (pair && !pair->same_architecture(*o.pair)) return false;
    return envelope.same_architecture(o.envelope) && suck.same_architecture(o.suck);
}

QBundle evaluate_bundle(const QNetworks& nets, const EncodedState& state) {
    QBundle b;
    const std::size_t n = state.size();
    nn::Mlp::Tape tape;
    for (std::size_t i = 0; i < n; ++i) {
        const auto in = state.single_input(i);
        b.q_e.push_back(nets.envelope.forward(in, tape));
        b.q_s.push_back(nets.suck.forward(in, tape));
    }
    if (nets.pair && n > 1) {
        b.q_es.reserve(n * (n - 1) / 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const bool i_envelops = b.q_e[i] >= b.q_e[j];
                b.q_es.push_back(nets.pair->forward(i_envelops ? state.pair_input(i, j) : state.pair_input(j, i), tape));
            }
    }
    return b;
}

namespace {

constexpr char kMagic[8] = {'G', 'S', 'I', 'M', 'Q', 'N', 'E', 'T'};
constexpr std::uint32_t kCheckpointVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) os.put(static_cast<char>((v >> (8 * k)) & 0xFF));
}
void put_u64(std::ostream& os, std::uint64_t v) {
    for (int k = 0; k < 8; ++k) os.put(static_cast<char>((v >> (8 * k)) & 0xFF));
}
std::uint64_t get_uint(std::istream& is, int bytes) {
    std::uint64_t v = 0;
    for (int k = 0; k < bytes; ++k) {
        const int c = is.get();
        if (c == EOF) throw LearnerError("checkpoint: truncated file");
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * k);
    }
    return v;
}

void put_net(std::ostream& os, const std::string& name, const nn::Mlp& net) {
    put_u32(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_u32(os, static_cast<std::uint32_t>(net.layer_sizes().size()));
    for (int s : net.layer_sizes()) put_u32(os, static_cast<std::uint32_t>(s));
    put_u64(os, net.param_count());
    for (double p : net.params()) put_u64(os, std::bit_cast<std::uint64_t>(p));
}

std::pair<std::string, nn::Mlp> get_net(std::istream& is) {
    const auto name_len = get_uint(is, 4);
    if (name_len > 64) throw LearnerError("checkpoint: bad net name");
    std::string name(name_len, '\0');
    is.read(name.data(), static_cast<std::streamsize>(name_len));
    const auto layers = get_uint(is, 4);
    if (layers < 2 || layers > 16) throw LearnerError("checkpoint: bad layer count");
    std::vector<int> sizes;
    for (std::uint64_t l = 0; l < layers; ++l) sizes.push_back(static_cast<int>(get_uint(is, 4)));
    nn::Mlp net(sizes);
    if (get_uint(is, 8) != net.param_count()) throw LearnerError("checkpoint: parameter count mismatch");
    for (double& p : net.params()) {
        p = std::bit_cast<double>(get_uint(is, 8));
        if (!std::isfinite(p)) throw LearnerError("checkpoint: non-finite parameter");
    }
    return {name, std::move(net)};
}

}  // namespace

void save_checkpoint(std::ostream& os, const QNetworks& nets) {
    os.write(kMagic, sizeof kMagic);
    put_u32(os, kCheckpointVersion);
    put_u32(os, nets.pair ? 3u : 2u);
    put_net(os, "envelope", nets.envelope);
    put_net(os, "suck", nets.suck);
    if (nets.pair) put_net(os, "pair", *nets.pair);
}

QNetworks load_checkpoint(std::istream& is) {
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw LearnerError("checkpoint: bad magic");
    if (get_uint(is, 4) != kCheckpointVersion) throw LearnerError("checkpoint: unsupported version");
    const auto count = get_uint(is, 4);
    if (count != 2 && count != 3) throw LearnerError("checkpoint: bad network count");
    QNetworks nets;
    for (std::uint64_t k = 0; k < count; ++k) {
        auto [name, net] = get_net(is);
        if (name == "envelope") nets.envelope = std::move(net);
        else if (name == "suck") nets.suck = std::move(net);
        else if (name == "pair") nets.pair = std::move(net);
        else throw LearnerError("checkpoint: unknown network '" + name + "'");
    }
    return nets;
}

// ---------------------------------------------------------------------------

const char* to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::eses_drl: return "eses_drl";
        case PolicyKind::es_drl: return "es_drl";
        case PolicyKind::eses_reactive: return "eses_reactive";
        case PolicyKind::es_reactive: return "es_reactive";
        case PolicyKind::ablation_1: return "ablation_1";
        case PolicyKind::ablation_2: return "ablation_2";
        case PolicyKind::oracle: return "oracle";
    }
    return "?";
}

PolicyKind policy_from_string(const std::string& s) {
    for (PolicyKind k : {PolicyKind::eses_drl, PolicyKind::es_drl, PolicyKind::eses_reactive,
                         PolicyKind::es_reactive, PolicyKind::ablation_1, PolicyKind::ablation_2,
                         PolicyKind::oracle})
        if (s == to_string(k)) return k;
    throw LearnerError("unknown policy '" + s + "'");
}

SchemeTraits traits_of(PolicyKind kind) {
    SchemeTraits t;
    switch (kind) {
        case PolicyKind::eses_drl:
        case PolicyKind::oracle:
            break;
        case PolicyKind::es_drl:
            t.use_pairs = false;
            break;
        case PolicyKind::eses_reactive:
            t.reactive = true;
            break;
        case PolicyKind::es_reactive:
            t.use_pairs = false;
            t.reactive = true;
            break;
        case PolicyKind::ablation_1:
            t.planner.orientation_optimization = false;
            t.planner.preenveloping = false;
            break;
        case PolicyKind::ablation_2:
            t.planner.preenveloping = false;
            break;
    }
    return t;
}

void LearnerConfig::validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw LearnerError("learner: gamma must lie in [0, 1]");
    if (!(learning_rate > 0.0)) throw LearnerError("learner: learning rate must be positive");
    if (!(eps_start >= 0.0 && eps_start <= 1.0 && eps_end >= 0.0 && eps_end <= 1.0))
        throw LearnerError("learner: epsilon endpoints must lie in [0, 1]");
    if (eps_anneal_steps < 0 || train_steps < 0) throw LearnerError("learner: step counts must be >= 0");
    if (sync_period < 1) throw LearnerError("learner: sync period must be >= 1");
    if (replay && (replay_capacity < 1 || replay_batch < 1)) throw LearnerError("learner: bad replay sizes");
    if (hidden < 1) throw LearnerError("learner: hidden width must be >= 1");
    if (!(train_pe >= 0.0 && train_pe <= 1.0)) throw LearnerError("learner: train_pe must lie in [0, 1]");
}

double LearnerConfig::epsilon_at(int step) const {
    if (eps_anneal_steps <= 0 || step >= eps_anneal_steps) return eps_end;
    const double f = static_cast<double>(step) / eps_anneal_steps;
    return eps_start + (eps_end - eps_start) * f;
}

void write_train_log(std::ostream& os, const std::vector<TrainLogRow>& rows) {
    auto flag = [](const std::optional<bool>& b) { return !b ? "na" : (*b ? "1" : "0"); };
    os << "step,epsilon,loss,reward,kind,envelope_success,suck_success,explored\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.6f,%.9g,%.6f,", r.step, r.epsilon, r.loss, r.reward);
        os << buf << to_string(r.kind) << ',' << flag(r.envelope_success) << ',' << flag(r.suck_success) << ','
           << (r.explored ? 1 : 0) << '\n';
    }
}

void ReplayBuffer::push(Transition t) {
    if (items_.size() < capacity_) {
        items_.push_back(std::move(t));
    } else {
        items_[next_] = std::move(t);
    }
    next_ = (next_ + 1) % capacity_;
}

const Transition& ReplayBuffer::sample(std::mt19937_64& rng) const {
    if (items_.empty()) throw LearnerError("replay: empty buffer");
    return items_[std::uniform_int_distribution<std::size_t>(0, items_.size() - 1)(rng)];
}

// ---------------------------------------------------------------------------

QLearner::QLearner(PolicyKind kind, const LearnerConfig& config, const EnvConfig& env, std::uint64_t seed)
    : QLearner(kind, config, env, QNetworks::make(traits_of(kind).use_pairs, config.hidden, seed)) {}

QLearner::QLearner(PolicyKind kind, const LearnerConfig& config, const EnvConfig& env, QNetworks nets)
    : kind_(kind), traits_(traits_of(kind)), config_(config), env_(env), online_(std::move(nets)) {
    if (kind == PolicyKind::oracle) throw LearnerError("the oracle policy has no networks");
    if (online_.pair.has_value() != traits_.use_pairs)
        throw LearnerError("networks do not match the scheme of policy " + std::string(to_string(kind)));
    target_ = online_;
    adam_e_ = nn::Adam(online_.envelope.param_count(), config.learning_rate);
    adam_s_ = nn::Adam(online_.suck.param_count(), config.learning_rate);
    if (online_.pair) adam_es_ = nn::Adam(online_.pair->param_count(), config.learning_rate);
}

void QLearner::set_learning_rate(double lr) {
    adam_e_.set_learning_rate(lr);
    adam_s_.set_learning_rate(lr);
    adam_es_.set_learning_rate(lr);
}

double QLearner::label(ActionKind kind, const Outcome& outcome) const {
    if (traits_.reactive) return outcome.objects_picked() > 0 ? 1.0 : 0.0;
    return reward_of(kind, outcome, env_.rewards);
}

double QLearner::update(const EncodedState& s, const ActionChoice& a, double reward, const EncodedState& next,
                        bool terminal) {
    nn::Mlp* net = nullptr;
    nn::Adam* adam = nullptr;
    std::vector<double> input;
    switch (a.kind) {
        case ActionKind::enveloping:
            net = &online_.envelope;
            adam = &adam_e_;
            input = s.single_input(a.first);
            break;
        case ActionKind::sucking:
            net = &online_.suck;
            adam = &adam_s_;
            input = s.single_input(a.first);
            break;
        case ActionKind::enveloping_then_sucking:
            if (!online_.pair) throw LearnerError("update: scheme has no pair network");
            net = &*online_.pair;
            adam = &adam_es_;
            input = s.pair_input(a.first, a.second);
            break;
    }

    nn::Mlp::Tape tape;
    const double q = net->forward(input, tape);

    const double gamma = traits_.reactive ? 0.0 : config_.gamma;
    double y = reward;
    if (!terminal && gamma > 0.0 && next.size() > 0) {
        const ActionChoice best = select_action(evaluate_bundle(online_, next));
        const nn::Mlp& tnet = best.kind == ActionKind::enveloping ? target_.envelope
                              : best.kind == ActionKind::sucking  ? target_.suck
                                                                  : *target_.pair;
        const auto tin = best.kind == ActionKind::enveloping_then_sucking ? next.pair_input(best.first, best.second)
                                                                          : next.single_input(best.first);
        y += gamma * tnet.forward(tin);
    }

    const double loss = nn::huber_loss(std::abs(y - q));
    std::vector<double> grad(net->param_count(), 0.0);
    net->backward(tape, nn::huber_grad_wrt_q(q, y), grad);
    adam->step(net->params(), grad);
    return loss;
}

ActionChoice random_action(std::size_t n, bool use_pairs, std::mt19937_64& rng) {
    if (n == 0) throw LearnerError("random_action: no objects");
    const int kinds = (use_pairs && n > 1) ? 3 : 2;
    const int k = std::uniform_int_distribution<int>(0, kinds - 1)(rng);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    ActionChoice a;
    a.first = pick(rng);
    a.second = a.first;
    if (k == 0) {
        a.kind = ActionKind::enveloping;
    } else if (k == 1) {
        a.kind = ActionKind::sucking;
    } else {
        a.kind = ActionKind::enveloping_then_sucking;
        a.second = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
        if (a.second >= a.first) ++a.second;
    }
    return a;
}

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

GraspAction to_grasp(const Episode& ep, const StateViews& views, const ActionChoice& a) {
    const int first = views.ids.at(a.first);
    const int second = a.kind == ActionKind::enveloping_then_sucking ? views.ids.at(a.second) : -1;
    return ep.make_action(a.kind, first, second);
}

}  // namespace

SceneFactory training_scenes(double pe, const SceneParams& params, std::vector<ObjectTemplate> catalog) {
    return [pe, params, catalog = std::move(catalog)](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        const int n = std::uniform_int_distribution<int>(params.min_objects, params.max_objects)(rng);
        return spawn_scene_retrying(pe, n, catalog, rng(), params);
    };
}

TrainResult train(PolicyKind kind, const SceneFactory& factory, const LearnerConfig& config,
                  const EnvConfig& env, std::uint64_t seed) {
    config.validate();
    env.rewards.validate(config.gamma);
    EnvConfig env_cfg = env;
    env_cfg.planner = traits_of(kind).planner;
    env_cfg.planner.xi = env.planner.xi;
    env_cfg.planner.min_envelope_depth = env.planner.min_envelope_depth;

    QLearner learner(kind, config, env_cfg, mix(seed, 1));
    std::mt19937_64 rng(mix(seed, 2));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ReplayBuffer replay(static_cast<std::size_t>(config.replay ? config.replay_capacity : 1));

    TrainResult result;
    result.log.reserve(static_cast<std::size_t>(config.train_steps));
    std::optional<Episode> ep;
    std::uint64_t episode_no = 0;
    StateViews views;

    for (int step = 0; step < config.train_steps; ++step) {
        if (!ep || ep->terminal()) {
            const std::uint64_t es = mix(seed, 1000 + episode_no++);
            ep.emplace(factory(es), env_cfg, mix(es, 7));
            views = ep->views();
        }
        const EncodedState enc = encode_state(views);
        const double eps = config.epsilon_at(step);
        const bool explored = unit(rng) < eps;
        ActionChoice choice = explored ? random_action(enc.size(), learner.traits().use_pairs, rng)
                                       : select_action(learner.bundle(enc));
        if (explored && choice.kind == ActionKind::enveloping_then_sucking) {
            // Random pair, but the envelope side follows the same rule as greedy selection.
            const nn::Mlp& qe = learner.online().envelope;
            if (qe.forward(enc.single_input(choice.second)) > qe.forward(enc.single_input(choice.first)))
                std::swap(choice.first, choice.second);
        }

        const Scene before = ep->scene();
        const GraspAction action = to_grasp(*ep, views, choice);
        StepResult res = ep->step(action);
        const double r = learner.label(choice.kind, res.outcome);
        const bool cleared = ep->scene().objects.empty();
        const EncodedState next = encode_state(res.views);

        double loss = learner.update(enc, choice, r, next, cleared);
        if (config.replay) {
            replay.push({before, choice, r, ep->scene(), cleared});
            for (int b = 0; b < config.replay_batch && replay.size() > 1; ++b) {
                const Transition& t = replay.sample(rng);
                const EncodedState ts = encode_state(make_views(t.state, env_cfg.resolution));
                const EncodedState tn = encode_state(make_views(t.next, env_cfg.resolution));
                learner.update(ts, t.action, t.reward, tn, t.terminal);
            }
        }
        if (!std::isfinite(loss) || loss > config.divergence_limit)
            throw LearnerError("training diverged at step " + std::to_string(step));
        if ((step + 1) % config.sync_period == 0) learner.sync_target();

        TrainLogRow row;
        row.step = step;
        row.epsilon = eps;
        row.loss = loss;
        row.reward = res.outcome.reward;
        row.kind = choice.kind;
        row.envelope_success = res.outcome.envelope_success;
        row.suck_success = res.outcome.suck_success;
        row.explored = explored;
        result.log.push_back(row);

        views = std::move(res.views);
    }
    result.nets = learner.online();
    return result;
}

// ---------------------------------------------------------------------------

LearnedPolicy::LearnedPolicy(PolicyKind kind, const LearnerConfig& config, const EnvConfig& env, QNetworks nets,
                             bool continual)
    : learner_(kind, config, env, std::move(nets)), continual_(continual), sync_period_(config.sync_period) {}

ActionChoice LearnedPolicy::decide(const Scene&, const StateViews& views) {
    return select_action(learner_.bundle(encode_state(views)));
}

void LearnedPolicy::observe(const StateViews& before, const ActionChoice& a, const Outcome& outcome,
                            const StateViews& after, bool terminal) {
    if (!continual_) return;
    learner_.update(encode_state(before), a, learner_.label(a.kind, outcome), encode_state(after), terminal);
    if (++updates_ % sync_period_ == 0) learner_.sync_target();
}

ActionChoice OraclePolicy::decide(const Scene& scene, const StateViews& views) {
    auto position = [&](int id) {
        return static_cast<std::size_t>(std::find(views.ids.begin(), views.ids.end(), id) - views.ids.begin());
    };
    // Single-affinity objects are consumed before flexible ones.
    const SceneObject* env = nullptr;
    const SceneObject* suck = nullptr;
    for (const auto& o : scene.objects)
        if (o.affinity == Affinity::envelope_only && !env) env = &o;
    for (const auto& o : scene.objects)
        if (o.affinity == Affinity::suck_only && !suck) suck = &o;
    for (const auto& o : scene.objects) {
        if (o.affinity != Affinity::both) continue;
        if (!env && &o != suck) env = &o;
        else if (!suck && &o != env) suck = &o;
    }
    if (env && suck) return {0.0, ActionKind::enveloping_then_sucking, position(env->id), position(suck->id)};
    if (env) return {0.0, ActionKind::enveloping, position(env->id), position(env->id)};
    if (suck) return {0.0, ActionKind::sucking, position(suck->id), position(suck->id)};
    throw LearnerError("oracle: empty scene");
}

}  // namespace graspsim
