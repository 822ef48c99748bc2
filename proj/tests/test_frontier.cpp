#include <doctest.h>

#include <string>
#include <vector>

#include "seccorpus/frontier.hpp"

using namespace seccorpus;

namespace {

std::vector<std::string> drain(Frontier& frontier) {
    std::vector<std::string> order;
    while (auto entry = frontier.pop()) order.push_back(entry->url);
    return order;
}

}  // namespace

TEST_CASE("seed domains are visited in seed order, BFS inside each") {
    Frontier f;
    f.push("http://a.com/x", "a.com", 0);
    f.push("http://b.com/y", "b.com", 0);

    auto first = f.pop();
    REQUIRE(first);
    CHECK(first->url == "http://a.com/x");

    // a.com/x discovers two same-domain links.
    f.push("http://a.com/p", "a.com", 1);
    f.push("http://a.com/q", "a.com", 1);

    CHECK(drain(f) == std::vector<std::string>{"http://a.com/p", "http://a.com/q", "http://b.com/y"});
}

TEST_CASE("single entry pops itself") {
    Frontier f;
    f.push("http://one.com/", "one.com", 0);
    auto entry = f.pop();
    REQUIRE(entry);
    CHECK(entry->url == "http://one.com/");
    CHECK_FALSE(f.pop());
}

TEST_CASE("same depth ties break by discovery order") {
    Frontier f;
    f.push("http://a.com/", "a.com", 0);
    REQUIRE(f.pop());
    f.push("http://a.com/2", "a.com", 1);
    f.push("http://a.com/1", "a.com", 1);
    CHECK(drain(f) == std::vector<std::string>{"http://a.com/2", "http://a.com/1"});
}

TEST_CASE("depth orders before discovery sequence within a domain") {
    Frontier f;
    f.push("http://a.com/", "a.com", 0);
    REQUIRE(f.pop());
    f.push("http://a.com/deep", "a.com", 2);
    f.push("http://a.com/shallow", "a.com", 1);
    CHECK(drain(f) == std::vector<std::string>{"http://a.com/shallow", "http://a.com/deep"});
}

TEST_CASE("domains discovered mid-crawl run depth-first, most recent first") {
    Frontier f;
    f.push("http://a.com/", "a.com", 0);
    f.push("http://b.com/", "b.com", 0);

    REQUIRE(f.pop()->url == "http://a.com/");
    // a.com/ discovers two new domains, c first then d.
    f.push("http://c.com/", "c.com", 1);
    f.push("http://d.com/", "d.com", 1);

    CHECK(drain(f) ==
          std::vector<std::string>{"http://d.com/", "http://c.com/", "http://b.com/"});
}

TEST_CASE("a domain stays active while its last page yields deeper links") {
    Frontier f;
    f.push("http://a.com/", "a.com", 0);
    f.push("http://b.com/", "b.com", 0);

    REQUIRE(f.pop()->url == "http://a.com/");  // a now drained but active
    f.push("http://a.com/child", "a.com", 1);  // produced by processing a.com/

    CHECK(drain(f) == std::vector<std::string>{"http://a.com/child", "http://b.com/"});
}

TEST_CASE("descent chains follow the newest domain") {
    Frontier f;
    f.push("http://a.com/", "a.com", 0);
    REQUIRE(f.pop());
    f.push("http://c.com/", "c.com", 1);
    f.push("http://d.com/", "d.com", 1);
    REQUIRE(f.pop()->url == "http://d.com/");
    f.push("http://e.com/", "e.com", 2);  // discovered from d

    CHECK(drain(f) == std::vector<std::string>{"http://e.com/", "http://c.com/"});
}

TEST_CASE("duplicate URLs are rejected") {
    Frontier f;
    CHECK(f.push("http://a.com/x", "a.com", 0));
    CHECK_FALSE(f.push("http://a.com/x", "a.com", 1));
    REQUIRE(f.pop());
    CHECK_FALSE(f.push("http://a.com/x", "a.com", 2));  // visited, still rejected
    CHECK(f.empty());
}

TEST_CASE("discovered_seq is unique and strictly increasing") {
    Frontier f;
    f.push("http://a.com/1", "a.com", 0);
    f.push("http://b.com/2", "b.com", 0);
    f.push("http://a.com/3", "a.com", 1);
    std::uint64_t last = 0;
    bool first = true;
    std::vector<FrontierEntry> entries;
    while (auto e = f.pop()) entries.push_back(*e);
    REQUIRE(entries.size() == 3);
    std::sort(entries.begin(), entries.end(),
              [](const FrontierEntry& x, const FrontierEntry& y) {
                  return x.discovered_seq < y.discovered_seq;
              });
    for (const auto& e : entries) {
        if (!first) CHECK(e.discovered_seq > last);
        last = e.discovered_seq;
        first = false;
    }
}

TEST_CASE("consecutive pops within one domain are (depth, seq) monotone") {
    Frontier f;
    f.push("http://a.com/", "a.com", 0);
    f.push("http://a.com/b", "a.com", 1);
    f.push("http://a.com/c", "a.com", 1);
    f.push("http://a.com/d", "a.com", 2);

    std::pair<int, std::uint64_t> prev{-1, 0};
    while (auto e = f.pop()) {
        std::pair<int, std::uint64_t> cur{e->depth, e->discovered_seq};
        CHECK(cur > prev);
        prev = cur;
    }
}
