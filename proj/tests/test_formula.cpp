#include <gtest/gtest.h>

#include "posetmc/evaluate.hpp"
#include "posetmc/formula.hpp"
#include "posetmc/poset.hpp"
#include "support/oracles.hpp"

using namespace posetmc;

TEST(Parse, QuantifierPrefix) {
    EXPECT_EQ(parse("E x. A y. x <= y"), Formula::exists("x", Formula::forall("y", Formula::less_eq("x", "y"))));
}

TEST(Parse, NegationStaysAboveQuantifier) {
    EXPECT_EQ(parse("!(E x. red(x))"), Formula::neg(Formula::exists("x", Formula::color("red", "x"))));
}

TEST(Parse, FreeVariableRejectedForSentences) {
    EXPECT_NO_THROW(parse("E x. x <= z"));
    try {
        parse_sentence("E x. x <= z");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("free variable z"), std::string::npos);
    }
}

TEST(Parse, Precedence) {
    // & binds tighter than |, which binds tighter than ->
    const Formula f = parse("a(x) | b(x) & c(x) -> d(x)");
    const Formula lhs = Formula::disj(Formula::color("a", "x"),
                                      Formula::conj(Formula::color("b", "x"), Formula::color("c", "x")));
    EXPECT_EQ(f, Formula::disj(Formula::neg(lhs), Formula::color("d", "x")));
}

TEST(Parse, ImplicationIsRightAssociative) {
    EXPECT_EQ(parse("a(x) -> b(x) -> c(x)"),
              Formula::disj(Formula::neg(Formula::color("a", "x")),
                            Formula::disj(Formula::neg(Formula::color("b", "x")), Formula::color("c", "x"))));
}

TEST(Parse, Biconditional) {
    const Formula a = Formula::color("a", "x"), b = Formula::color("b", "x");
    EXPECT_EQ(parse("a(x) <-> b(x)"),
              Formula::conj(Formula::disj(Formula::neg(a), b), Formula::disj(a, Formula::neg(b))));
}

TEST(Parse, QuantifierBodyExtendsRight) {
    EXPECT_EQ(parse("E x. a(x) & b(x)"),
              Formula::exists("x", Formula::conj(Formula::color("a", "x"), Formula::color("b", "x"))));
}

TEST(Parse, InequalitySugarAndComments) {
    EXPECT_EQ(parse("# a comment\nA x. A y. x != y # trailing\n"),
              Formula::forall("x", Formula::forall("y", Formula::neg(Formula::equal("x", "y")))));
}

TEST(Parse, EdgeAtom) {
    EXPECT_EQ(parse("E x. E y. edge(x, y)"), Formula::exists("x", Formula::exists("y", Formula::edge("x", "y"))));
}

TEST(Parse, ErrorsCarryPosition) {
    try {
        parse("E x.\n  x <= $");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.column(), 8u);
    }
    EXPECT_THROW(parse("E x x <= x"), ParseError);
    EXPECT_THROW(parse("(x <= y"), ParseError);
    EXPECT_THROW(parse("x <= y)"), ParseError);
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("E E. E <= E"), ParseError);
}

TEST(Parse, RebindingIsRenamedApart) {
    const Formula f = parse("E x. (red(x) & E x. blue(x))");
    ASSERT_EQ(f.op(), Op::exists);
    const Formula inner = f.body().right();
    ASSERT_EQ(inner.op(), Op::exists);
    EXPECT_NE(inner.var(), "x");
    EXPECT_EQ(inner.body().var(), inner.var());
    EXPECT_EQ(f.body().left().var(), "x");
}

TEST(Parse, BoundNameClashingWithFreeNameIsRenamed) {
    const Formula f = parse("x <= y & E x. x = x");
    EXPECT_EQ(free_variables(f), (std::vector<std::string>{"x", "y"}));
    EXPECT_NE(f.right().var(), "x");
}

TEST(Nnf, QuantifierDuality) {
    EXPECT_EQ(to_nnf(parse("!E x. red(x)")), parse("A x. !red(x)"));
}

TEST(Nnf, DeMorgan) {
    EXPECT_EQ(to_nnf(parse("!(a(x) & b(x))")), parse("!a(x) | !b(x)"));
    EXPECT_EQ(to_nnf(parse("!!a(x)")), parse("a(x)"));
}

TEST(Nnf, FixpointOnNnfInput) {
    const Formula f = parse("E x. A y. (!(x <= y) | red(y)) & x = x");
    ASSERT_TRUE(is_nnf(f));
    EXPECT_EQ(to_nnf(f), f);
}

TEST(Rank, Examples) {
    EXPECT_EQ(quantifier_rank(parse("x <= y")), 0);
    EXPECT_EQ(quantifier_rank(parse("E x. ((A y. y <= x) | E z. z <= x)")), 2);
    EXPECT_EQ(quantifier_rank(parse("E x. E y. E z. x <= z")), 3);
}

TEST(Positions, Examples) {
    auto p = subformula_positions(parse("E x. red(x)"));
    ASSERT_EQ(p.size(), 2u);
    EXPECT_TRUE(p[0].free_vars.empty());
    EXPECT_EQ(p[1].free_vars, std::vector<std::string>{"x"});

    p = subformula_positions(parse("x <= y"));
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p[0].free_vars, (std::vector<std::string>{"x", "y"}));

    EXPECT_EQ(subformula_positions(parse("a(x) & b(y)")).size(), 3u);
}

TEST(Colors, DefaultColorWhenNoneMentioned) {
    ColorSet none(color_names(parse("E x. x = x")));
    EXPECT_EQ(none.size(), 1u);
    EXPECT_TRUE(none.contains(std::string(ColorSet::default_color)));
    ColorSet some(color_names(parse("E x. red(x) | blue(x) | red(x)")));
    EXPECT_EQ(some.names(), (std::vector<std::string>{"blue", "red"}));
}

// Random formulas with general negations, to exercise to_nnf.
static Formula scramble(const Formula& f, std::mt19937_64& rng) {
    Formula g;
    switch (f.op()) {
    case Op::exists:
    case Op::forall: g = Formula::quantifier(f.op(), f.var(), scramble(f.body(), rng)); break;
    case Op::conj: g = Formula::conj(scramble(f.left(), rng), scramble(f.right(), rng)); break;
    case Op::disj: g = Formula::disj(scramble(f.left(), rng), scramble(f.right(), rng)); break;
    case Op::neg: g = Formula::neg(scramble(f.left(), rng)); break;
    default: g = f;
    }
    // wrap in a double negation now and then, or push one through by hand
    switch (rng() % 4) {
    case 0: return Formula::neg(Formula::neg(g));
    case 1:
        if (g.op() == Op::conj)
            return Formula::neg(Formula::disj(Formula::neg(g.left()), Formula::neg(g.right())));
        return g;
    default: return g;
    }
}

TEST(Nnf, Properties) {
    oracle::SentenceGen gen(11, {"c0", "c1"});
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
        const Formula f = scramble(gen.sentence(1 + i % 2), rng);
        const Formula n = to_nnf(f);
        ASSERT_TRUE(is_nnf(n));
        EXPECT_EQ(to_nnf(n), n);
        EXPECT_EQ(quantifier_rank(n), quantifier_rank(f));
        EXPECT_LE(formula_size(n), 2 * formula_size(f));
        const Poset p = random_poset(1 + i % 6, 1 + i % 3 > 1 + i % 6 ? 1 : 1 + i % 3, 2, 1000 + i);
        EXPECT_EQ(eval_naive(p, f), eval_naive(p, n)) << to_string(f);
    }
}

TEST(Print, RoundTrip) {
    oracle::SentenceGen gen(3, {"red", "c1"});
    std::mt19937_64 rng(9);
    for (int i = 0; i < 300; ++i) {
        const Formula f = scramble(gen.sentence(1 + i % 3), rng);
        EXPECT_EQ(parse(to_string(f)), f) << to_string(f);
    }
}
