#include <doctest.h>

#include <algorithm>

#include "contractcheck/errors.hpp"
#include "contractcheck/io.hpp"
#include "contractcheck/petri_net.hpp"
#include "support/fixtures.hpp"
#include "support/random_nets.hpp"

using namespace contractcheck;

namespace {

PetriNet small_net() {
    return parse_net(R"(net "small"
place a tokens=1
place b
place guard
transition go actor=P action=go
transition stop actor=P action=stop
arc a -> go
arc go -> b
arc guard -o go
arc b <-> stop
)");
}

bool has_code(const std::vector<Diagnostic>& diags, const std::string& code) {
    return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.code == code; });
}

}  // namespace

TEST_CASE("incidence matrices follow sorted place and transition order") {
    const auto net = small_net();
    REQUIRE(net.places().size() == 3);
    CHECK(net.places()[0].id == "a");
    CHECK(net.places()[2].id == "guard");
    const auto a = *net.place_index("a");
    const auto b = *net.place_index("b");
    const auto guard = *net.place_index("guard");
    const auto go = *net.transition_index("go");
    const auto stop = *net.transition_index("stop");
    CHECK(net.consume()(a, go) == 1);
    CHECK(net.produce()(b, go) == 1);
    CHECK(net.inhibit()(guard, go) != 0);
    CHECK(net.consume()(b, stop) == 1);
    CHECK(net.produce()(b, stop) == 1);
}

TEST_CASE("inhibitor arcs disable while the place holds tokens") {
    const auto net = small_net();
    CHECK(enabled_transitions(net, net.initial_marking()) == std::vector<std::string>{"go"});
    const auto blocked = net.marking_from({{"a", 1}, {"guard", 2}});
    CHECK(enabled_transitions(net, blocked).empty());
    CHECK_THROWS_AS(fire(net, blocked, "go"), NotEnabled);
}

TEST_CASE("firing moves tokens and leaves the input untouched") {
    const auto net = small_net();
    const auto m0 = net.initial_marking();
    const auto m1 = fire(net, m0, "go");
    CHECK(net.to_map(m0) == std::map<std::string, Tokens>{{"a", 1}});
    CHECK(net.to_map(m1) == std::map<std::string, Tokens>{{"b", 1}});
    // bidirectional arc: needs the token, gives it back
    CHECK(fire(net, m1, "stop") == m1);
}

TEST_CASE("token game errors") {
    const auto net = small_net();
    CHECK_THROWS_AS(net.marking_from({{"nowhere", 1}}), UnknownPlace);
    CHECK_THROWS_AS(enabled_transitions(net, std::map<std::string, Tokens>{{"nowhere", 1}}), UnknownPlace);
    CHECK_THROWS_AS(fire(net, net.initial_marking(), "fly"), UnknownTransition);
}

TEST_CASE("validate_net reports structural problems") {
    SUBCASE("clean net") { CHECK(validate_net(small_net()).empty()); }
    SUBCASE("duplicate ids across places and transitions") {
        PetriNet net("dup", {{"x", 1}}, {{"x", {"A", "a"}}}, {});
        CHECK(has_code(validate_net(net), "E_DUP_ID"));
    }
    SUBCASE("negative tokens") {
        PetriNet net("neg", {{"p", -1}}, {}, {});
        CHECK(has_code(validate_net(net), "E_NEGATIVE_TOKENS"));
    }
    SUBCASE("marked loop-control place") {
        Place q{"q", 1, LegalKind::none, true};
        PetriNet net("lcp", {q}, {}, {});
        CHECK(has_code(validate_net(net), "E_LCP_TOKENS"));
    }
    SUBCASE("unknown arc endpoint") {
        PetriNet net("arc", {{"p", 1}}, {{"t", {"A", "a"}}}, {{ArcKind::normal, "p", "ghost"}});
        CHECK(has_code(validate_net(net), "E_UNKNOWN_NODE"));
    }
    SUBCASE("place to place arc") {
        PetriNet net("pp", {{"p", 1}, {"q", 0}}, {}, {{ArcKind::normal, "p", "q"}});
        CHECK(has_code(validate_net(net), "E_ARC_ENDPOINTS"));
    }
    SUBCASE("empty label") {
        PetriNet net("lbl", {{"p", 1}}, {{"t", {"", "a"}}}, {});
        CHECK(has_code(validate_net(net), "E_EMPTY_LABEL"));
    }
    SUBCASE("no tokens anywhere") {
        PetriNet net("dry", {{"p", 0}}, {}, {});
        CHECK(has_code(validate_net(net), "E_NO_INITIAL_TOKENS"));
    }
}

TEST_CASE("insert_loop_controls adds one empty inhibiting place per self-loop") {
    const auto net = parse_net(R"(net "loop"
place p tokens=1
transition t actor=A action=spin
arc p <-> t
)");
    REQUIRE(has_self_loop(net, 0));
    CHECK_FALSE(has_loop_control(net, 0));
    const auto controlled = insert_loop_controls(net);
    CHECK(controlled.places().size() == 2);
    const auto q = controlled.place_index("lcp_t");
    REQUIRE(q);
    CHECK(controlled.places()[*q].is_lcp);
    CHECK(controlled.places()[*q].initial_tokens == 0);
    CHECK(has_loop_control(controlled, 0));
    CHECK(insert_loop_controls(controlled) == controlled);

    const auto m1 = fire(controlled, controlled.initial_marking(), "t");
    CHECK(enabled_transitions(controlled, m1).empty());
}

TEST_CASE("loop-control names avoid collisions") {
    const auto net = parse_net(R"(net "clash"
place lcp_t tokens=1
transition t actor=A action=spin
arc lcp_t <-> t
)");
    const auto controlled = insert_loop_controls(net);
    CHECK(controlled.places().size() == 2);
    CHECK(validate_net(controlled).empty());
}

TEST_CASE("insert_loop_controls is idempotent on random nets") {
    cc_test::Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        cc_test::RandomNetOptions o;
        o.loop_controls = false;
        const auto net = cc_test::random_net(rng, o);
        const auto once = insert_loop_controls(net);
        CHECK(insert_loop_controls(once) == once);
        for (std::size_t t = 0; t < once.transitions().size(); ++t)
            if (has_self_loop(once, t)) CHECK(has_loop_control(once, t));
    }
}

TEST_CASE("gcdc_legal structure") {
    const auto net = load_net(cc_test::corpus_file("gcdc_legal.pnet"));
    CHECK(net.places().size() == 15);
    CHECK(net.transitions().size() == 5);
    const auto powers = std::count_if(net.places().begin(), net.places().end(),
                                      [](const Place& p) { return p.legal_kind == LegalKind::power; });
    CHECK(powers == 7);
    CHECK(validate_net(net).empty());
    CHECK(insert_loop_controls(net) == net);
}
