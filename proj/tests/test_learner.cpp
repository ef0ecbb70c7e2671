#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "graspsim/learner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace graspsim;

namespace {

QBundle random_bundle(std::size_t n, std::mt19937_64& rng, bool pairs = true) {
    std::uniform_real_distribution<double> u(-1.0, 3.0);
    QBundle b;
    for (std::size_t i = 0; i < n; ++i) {
        b.q_e.push_back(u(rng));
        b.q_s.push_back(u(rng));
    }
    if (pairs && n > 1)
        for (std::size_t k = 0; k < n * (n - 1) / 2; ++k) b.q_es.push_back(u(rng));
    return b;
}

bool same_choice(const ActionChoice& a, const ActionChoice& b) {
    return a.kind == b.kind && a.first == b.first && a.second == b.second;
}

}  // namespace

TEST_CASE("pair indexing") {
    for (std::size_t n = 2; n <= 9; ++n) {
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j, ++k) {
                CHECK(pair_index(i, j, n) == k);
                CHECK(pair_index(j, i, n) == k);
                CHECK(pair_from_index(k, n) == std::make_pair(i, j));
            }
    }
}

TEST_CASE("select_action worked examples") {
    QBundle one{{0.9}, {0.4}, {}};
    ActionChoice a = select_action(one);
    CHECK(a.kind == ActionKind::enveloping);
    CHECK(a.first == 0);
    CHECK(a.q == 0.9);

    QBundle two{{0.7, 0.3}, {0.2, 0.5}, {0.95}};
    a = select_action(two);
    CHECK(a.kind == ActionKind::enveloping_then_sucking);
    CHECK(a.first == 0);
    CHECK(a.second == 1);

    QBundle swapped{{0.3, 0.7}, {0.2, 0.5}, {0.95}};
    a = select_action(swapped);
    CHECK(a.first == 1);
    CHECK(a.second == 0);

    QBundle suck{{0.1, 0.2}, {0.2, 0.8}, {0.5}};
    a = select_action(suck);
    CHECK(a.kind == ActionKind::sucking);
    CHECK(a.first == 1);
}

TEST_CASE("ties go to the lowest index and the earlier kind") {
    QBundle b{{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}};
    const ActionChoice a = select_action(b);
    CHECK(a.kind == ActionKind::enveloping);
    CHECK(a.first == 0);
    QBundle c{{0.1, 0.1, 0.1}, {0.2, 0.7, 0.7}, {0.3, 0.3, 0.3}};
    CHECK(select_action(c).first == 1);
    CHECK_THROWS_AS(select_action(QBundle{}), LearnerError);
}

TEST_CASE("select_action is invariant under increasing transforms") {
    std::mt19937_64 rng(12);
    const std::vector<double (*)(double)> transforms{
        [](double x) { return 3.0 * x + 1.0; }, [](double x) { return std::exp(x); },
        [](double x) { return x * x * x; }, [](double x) { return std::atan(x); }};
    for (int trial = 0; trial < 200; ++trial) {
        const QBundle b = random_bundle(1 + trial % 7, rng, trial % 5 != 0);
        const ActionChoice a = select_action(b);
        CHECK(q_of(b, a) == a.q);
        for (auto f : transforms) {
            QBundle t = b;
            for (auto* v : {&t.q_e, &t.q_s, &t.q_es}) std::transform(v->begin(), v->end(), v->begin(), f);
            CHECK(same_choice(select_action(t), a));
        }
    }
}

TEST_CASE("select_action is the maximum over every legal action") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const QBundle b = random_bundle(1 + trial % 6, rng);
        double best = *std::max_element(b.q_e.begin(), b.q_e.end());
        best = std::max(best, *std::max_element(b.q_s.begin(), b.q_s.end()));
        if (b.has_pairs()) best = std::max(best, *std::max_element(b.q_es.begin(), b.q_es.end()));
        const ActionChoice a = select_action(b);
        CHECK(a.q == best);
        if (a.kind == ActionKind::enveloping_then_sucking) CHECK(b.q_e[a.first] >= b.q_e[a.second]);
    }
}

TEST_CASE("td_target") {
    std::mt19937_64 rng(2);
    const QBundle on = random_bundle(4, rng);
    const QBundle tg = random_bundle(4, rng);
    CHECK(td_target(2.5, true, on, tg, 0.5) == 2.5);
    CHECK(td_target(1.0, false, on, tg, 0.0) == 1.0);

    QBundle online{{0.1, 0.9}, {0.0, 0.2}, {0.3}};
    QBundle target{{0.4, 1.0}, {5.0, 5.0}, {5.0}};
    CHECK(td_target(1.0, false, online, target, 0.5) == 1.5);

    for (int k = 0; k < 50; ++k) {
        const QBundle b = random_bundle(1 + k % 5, rng);
        double best = select_action(b).q;
        CHECK(td_target(0.5, false, b, b, 1.0) == 0.5 + best);
    }
}

TEST_CASE("encoding dimensions and scaling") {
    Scene s;
    SceneObject o;
    o.id = 4;
    o.footprint = make_rect(Vec2(0.05, 0.05), 0.04, 0.04, 0);
    o.height = 0.05;
    s.objects.push_back(o);
    const StateViews v = make_views(s, 64);
    const EncodedState e = encode_state(v);
    REQUIRE(e.size() == 1);
    CHECK(*std::max_element(e.global.begin(), e.global.end()) == doctest::Approx(0.05 / kHeightScale));
    CHECK(e.single_input(0).size() == 512);
    const FeatureMap& local = e.objects[0];
    CHECK(local[7 * kFeatureSide + 7] == doctest::Approx(0.05 / kHeightScale));
    CHECK(local[8 * kFeatureSide + 8] == doctest::Approx(0.05 / kHeightScale));
    CHECK(local[0] == 0.0);
    CHECK(local[kFeatureCells - 1] == 0.0);
    const auto lit = std::count_if(local.begin(), local.end(), [](double x) { return x > 0.0; });
    CHECK(lit >= 16);
    CHECK(lit <= 49);
    StateViews coarse = make_views(s, 8);
    CHECK_THROWS_AS(encode_state(coarse), LearnerError);
}

TEST_CASE("bundle shapes and permutation equivariance") {
    const QNetworks nets = QNetworks::make(true, 16, 4);
    const Scene s4 = spawn_scene_retrying(0.5, 4, default_catalog(), 8);
    const QBundle b4 = evaluate_bundle(nets, encode_state(make_views(s4, 64)));
    CHECK(b4.q_e.size() == 4);
    CHECK(b4.q_es.size() == 6);

    Scene s1 = s4;
    s1.objects.resize(1);
    CHECK(evaluate_bundle(nets, encode_state(make_views(s1, 64))).q_es.empty());

    Scene rev = s4;
    std::reverse(rev.objects.begin(), rev.objects.end());
    const QBundle br = evaluate_bundle(nets, encode_state(make_views(rev, 64)));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(br.q_e[3 - i] == b4.q_e[i]);
        CHECK(br.q_s[3 - i] == b4.q_s[i]);
    }
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            CHECK(br.q_es[pair_index(3 - i, 3 - j, 4)] == b4.q_es[pair_index(i, j, 4)]);

    const QNetworks no_pairs = QNetworks::make(false, 16, 4);
    CHECK(evaluate_bundle(no_pairs, encode_state(make_views(s4, 64))).q_es.empty());
}

TEST_CASE("checkpoint round trip") {
    const QNetworks nets = QNetworks::make(true, 8, 21);
    std::stringstream ss;
    save_checkpoint(ss, nets);
    const std::string bytes = ss.str();
    CHECK(bytes.substr(0, 8) == "GSIMQNET");
    const QNetworks back = load_checkpoint(ss);
    CHECK(back.same_architecture(nets));
    CHECK(std::equal(back.pair->params().begin(), back.pair->params().end(), nets.pair->params().begin()));
    CHECK(std::equal(back.suck.params().begin(), back.suck.params().end(), nets.suck.params().begin()));

    std::istringstream bad("NOTACKPT");
    CHECK_THROWS_AS(load_checkpoint(bad), LearnerError);
    std::istringstream cut(bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_WITH_AS(load_checkpoint(cut), doctest::Contains("truncated"), LearnerError);
}

TEST_CASE("epsilon schedule") {
    LearnerConfig c;
    CHECK(c.epsilon_at(0) == 0.6);
    CHECK(c.epsilon_at(10000) == doctest::Approx(0.35));
    CHECK(c.epsilon_at(20000) == 0.1);
    CHECK(c.epsilon_at(50000) == 0.1);
    for (int s = 1; s < 20000; s += 97) CHECK(c.epsilon_at(s) < c.epsilon_at(s - 1));
}

TEST_CASE("config validation") {
    LearnerConfig c;
    CHECK_NOTHROW(c.validate());
    c.gamma = 1.2;
    CHECK_THROWS_AS(c.validate(), LearnerError);
    c = {};
    c.sync_period = 0;
    CHECK_THROWS_AS(c.validate(), LearnerError);
}

TEST_CASE("random actions cover the legal kinds uniformly") {
    std::mt19937_64 rng(5);
    std::map<ActionKind, int> counts;
    const int n = 30000;
    for (int k = 0; k < n; ++k) {
        const ActionChoice a = random_action(5, true, rng);
        ++counts[a.kind];
        CHECK(a.first < 5);
        if (a.kind == ActionKind::enveloping_then_sucking) CHECK(a.second != a.first);
    }
    for (auto [kind, c] : counts) CHECK(c / double(n) == doctest::Approx(1.0 / 3).epsilon(0.05));
    for (int k = 0; k < 500; ++k) {
        CHECK(random_action(1, true, rng).kind != ActionKind::enveloping_then_sucking);
        CHECK(random_action(4, false, rng).kind != ActionKind::enveloping_then_sucking);
    }
}

TEST_CASE("scheme traits") {
    CHECK(traits_of(PolicyKind::eses_drl).use_pairs);
    CHECK_FALSE(traits_of(PolicyKind::es_drl).use_pairs);
    CHECK(traits_of(PolicyKind::eses_reactive).reactive);
    CHECK_FALSE(traits_of(PolicyKind::es_reactive).use_pairs);
    CHECK_FALSE(traits_of(PolicyKind::ablation_1).planner.orientation_optimization);
    CHECK_FALSE(traits_of(PolicyKind::ablation_1).planner.preenveloping);
    CHECK(traits_of(PolicyKind::ablation_2).planner.orientation_optimization);
    CHECK_FALSE(traits_of(PolicyKind::ablation_2).planner.preenveloping);
    for (auto k : {"eses_drl", "es_drl", "eses_reactive", "es_reactive", "ablation_1", "ablation_2", "oracle"})
        CHECK(std::string(to_string(policy_from_string(k))) == k);
    CHECK_THROWS_AS(policy_from_string("greedy"), LearnerError);
}

TEST_CASE("reactive labels are success indicators") {
    const EnvConfig env;
    const LearnerConfig cfg;
    QLearner reactive(PolicyKind::eses_reactive, cfg, env, 1);
    QLearner drl(PolicyKind::eses_drl, cfg, env, 1);
    const Outcome full{true, true};
    const Outcome semi{false, true};
    CHECK(reactive.label(ActionKind::enveloping_then_sucking, full) == 1.0);
    CHECK(reactive.label(ActionKind::enveloping_then_sucking, semi) == 1.0);
    CHECK(drl.label(ActionKind::enveloping_then_sucking, full) == 2.5);
    CHECK(drl.label(ActionKind::enveloping_then_sucking, semi) == 0.5);
    CHECK_THROWS_AS(QLearner(PolicyKind::es_drl, cfg, env, QNetworks::make(true, 8, 1)), LearnerError);
}

TEST_CASE("updates move the online net toward the target and leave the target net alone") {
    const EnvConfig env;
    LearnerConfig cfg;
    cfg.learning_rate = 1e-3;
    QLearner l(PolicyKind::eses_drl, cfg, env, 3);
    const Scene s = spawn_scene_retrying(0.5, 5, default_catalog(), 3);
    const EncodedState st = encode_state(make_views(s, 64));
    const EncodedState nx = encode_state(make_views(s.without(s.objects[0].id), 64));
    const ActionChoice a{0.0, ActionKind::enveloping_then_sucking, 0, 1};
    const std::vector<double> target_before(l.target().pair->params().begin(), l.target().pair->params().end());
    const double q0 = q_of(l.bundle(st), a);
    const double y = 2.5;  // terminal
    for (int k = 0; k < 30; ++k) l.update(st, a, y, nx, true);
    CHECK(std::abs(q_of(l.bundle(st), a) - y) < std::abs(q0 - y));
    CHECK(std::equal(target_before.begin(), target_before.end(), l.target().pair->params().begin()));
    l.sync_target();
    CHECK(std::equal(l.online().pair->params().begin(), l.online().pair->params().end(),
                     l.target().pair->params().begin()));
}

TEST_CASE("replay buffer") {
    ReplayBuffer rb(3);
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(rb.sample(rng), LearnerError);
    const double rewards[] = {0.0, 0.5, 1.0, 2.5, 1.0};
    for (double r : rewards) {
        Transition t;
        t.reward = r;
        rb.push(t);
    }
    CHECK(rb.size() == 3);
    const std::set<double> allowed{0.0, 0.5, 1.0, 2.5};
    std::set<double> seen;
    for (int k = 0; k < 200; ++k) seen.insert(rb.sample(rng).reward);
    CHECK(seen == std::set<double>{1.0, 2.5});
    for (double r : seen) CHECK(allowed.count(r));
}

TEST_CASE("short training run is deterministic and logs every step") {
    LearnerConfig cfg;
    cfg.train_steps = 150;
    cfg.eps_anneal_steps = 150;
    cfg.sync_period = 20;
    cfg.hidden = 16;
    EnvConfig env;
    env.resolution = 32;
    SceneParams sp;
    sp.max_objects = 5;
    const auto factory = training_scenes(0.5, sp);
    const TrainResult a = train(PolicyKind::eses_drl, factory, cfg, env, 3);
    const TrainResult b = train(PolicyKind::eses_drl, factory, cfg, env, 3);
    REQUIRE(a.log.size() == 150);
    std::ostringstream la, lb;
    write_train_log(la, a.log);
    write_train_log(lb, b.log);
    CHECK(la.str() == lb.str());
    CHECK(la.str().rfind("step,epsilon,loss,reward,kind,envelope_success,suck_success,explored\n", 0) == 0);
    CHECK(std::equal(a.nets.envelope.params().begin(), a.nets.envelope.params().end(),
                     b.nets.envelope.params().begin()));
    for (const auto& r : a.log) {
        CHECK(std::isfinite(r.loss));
        CHECK(r.epsilon == cfg.epsilon_at(r.step));
    }

    cfg.replay = true;
    cfg.replay_batch = 2;
    const TrainResult c = train(PolicyKind::es_reactive, factory, cfg, env, 3);
    CHECK(c.log.size() == 150);
    CHECK_FALSE(c.nets.pair.has_value());
    for (const auto& r : c.log) CHECK(r.kind != ActionKind::enveloping_then_sucking);

    cfg.divergence_limit = 1e-12;
    cfg.replay = false;
    CHECK_THROWS_WITH_AS(train(PolicyKind::eses_drl, factory, cfg, env, 3), doctest::Contains("diverged"),
                         LearnerError);
}

TEST_CASE("training scenes respect the object-count range") {
    SceneParams sp;
    sp.min_objects = 3;
    sp.max_objects = 6;
    const auto f = training_scenes(0.5, sp);
    std::set<std::size_t> sizes;
    for (std::uint64_t s = 0; s < 60; ++s) sizes.insert(f(s).objects.size());
    CHECK(*sizes.begin() == 3);
    CHECK(*sizes.rbegin() == 6);
}

TEST_CASE("oracle policy pairs complementary objects") {
    const Scene s = spawn_scene_retrying(0.3, 10, default_catalog(), 4);
    OraclePolicy o;
    const StateViews v = make_views(s, 32);
    const ActionChoice a = o.decide(s, v);
    CHECK(a.kind == ActionKind::enveloping_then_sucking);
    CHECK(s.at(v.ids[a.first]).affinity == Affinity::envelope_only);
    CHECK(s.at(v.ids[a.second]).affinity == Affinity::suck_only);

    Scene only_suck = spawn_scene_retrying(0.0, 3, default_catalog(), 4);
    const StateViews w = make_views(only_suck, 32);
    CHECK(o.decide(only_suck, w).kind == ActionKind::sucking);
}

TEST_CASE("frozen learned policy is greedy") {
    const EnvConfig env;
    LearnerConfig cfg;
    cfg.hidden = 8;
    const QNetworks nets = QNetworks::make(true, 8, 6);
    LearnedPolicy p(PolicyKind::eses_drl, cfg, env, nets, false);
    const Scene s = spawn_scene_retrying(0.5, 6, default_catalog(), 5);
    const StateViews v = make_views(s, 64);
    CHECK(same_choice(p.decide(s, v), select_action(evaluate_bundle(nets, encode_state(v)))));
    CHECK(p.planner_options().preenveloping);
    LearnedPolicy abl(PolicyKind::ablation_1, cfg, env, nets, false);
    CHECK_FALSE(abl.planner_options().orientation_optimization);
}
