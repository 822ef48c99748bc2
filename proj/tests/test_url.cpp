#include <doctest.h>

#include "seccorpus/url.hpp"

using namespace seccorpus;

TEST_CASE("normalize_url canonicalizes scheme, host, port and dot segments") {
    CHECK(normalize_url("HTTP://A.com:80/p/../q#f", "") == "http://a.com/q");
    CHECK(normalize_url("https://X.org:443/", "") == "https://x.org/");
    CHECK(normalize_url("http://a.com", "") == "http://a.com/");
    CHECK(normalize_url("http://a.com:8080/x", "") == "http://a.com:8080/x");
    CHECK(normalize_url("http://a.com/x/./y/../z", "") == "http://a.com/x/z");
}

TEST_CASE("normalize_url preserves the query and strips the fragment") {
    CHECK(normalize_url("http://a.com/p?x=1&y=2#frag", "") == "http://a.com/p?x=1&y=2");
    CHECK(normalize_url("?q=1", "http://a.com/base") == "http://a.com/base?q=1");
}

TEST_CASE("normalize_url resolves relative references") {
    CHECK(normalize_url("../b", "http://a.com/x/y") == "http://a.com/b");
    CHECK(normalize_url("b", "http://a.com/x/y") == "http://a.com/x/b");
    CHECK(normalize_url("/abs", "http://a.com/x/y") == "http://a.com/abs");
    CHECK(normalize_url("", "http://a.com/x/y?k=v") == "http://a.com/x/y?k=v");
    CHECK(normalize_url("../../../up", "http://a.com/x/y") == "http://a.com/up");
}

TEST_CASE("normalize_url rejects garbage") {
    CHECK_FALSE(normalize_url("ht!tp::bad", ""));
    CHECK_FALSE(normalize_url("http://", ""));
    CHECK_FALSE(normalize_url("relative/only", ""));
    CHECK_FALSE(normalize_url("rel", "also relative"));
}

TEST_CASE("parse_url splits the pieces") {
    auto p = parse_url("https://User@Host.Example.COM:8443/a/b?q=1#frag");
    REQUIRE(p);
    CHECK(p->scheme == "https");
    CHECK(p->userinfo == "User");
    CHECK(p->host == "host.example.com");
    CHECK(p->port == 8443);
    CHECK(p->path == "/a/b");
    CHECK(p->query == "q=1");
}

TEST_CASE("registrable_domain applies the suffix list") {
    CHECK(registrable_domain("www.example.com") == "example.com");
    CHECK(registrable_domain("a.b.c.example.org") == "example.org");
    CHECK(registrable_domain("news.bbc.co.uk") == "bbc.co.uk");
    CHECK(registrable_domain("sub.shop.example.com.au") == "example.com.au");
    CHECK(registrable_domain("example.com") == "example.com");
    CHECK(registrable_domain("localhost") == "localhost");
    CHECK(registrable_domain("192.168.0.1") == "192.168.0.1");
    CHECK(registrable_domain("EXAMPLE.ORG.") == "example.org");
}
