#include <gtest/gtest.h>

#include "tmr/config.hpp"
#include "tmr/error.hpp"

using namespace tmr;

TEST(Config, DefaultsMatchTheLibraryDefaults) {
  const RunConfig c;
  EXPECT_EQ(c.get("seed"), "42");
  EXPECT_EQ(c.domain(), FeatureDomain::Pooled);
  const EvalSettings s = c.eval_settings();
  EXPECT_EQ(s.train.framework, Framework::Hierarchical);
  EXPECT_EQ(s.train.first_layer, Algorithm::Rf);
  EXPECT_EQ(s.train.second_layer, Algorithm::Svm);
  EXPECT_EQ(s.train.params.knn_k, 7);
  EXPECT_EQ(s.train.params.rf.n_trees, 200);
  EXPECT_EQ(s.train.select_k, 100);
  EXPECT_EQ(s.folds, 10);
  EXPECT_DOUBLE_EQ(s.train.c, 0.1);
  EXPECT_EQ(c.gen_spec().duration_s[0], 1800.0);
}

TEST(Config, ParsesFileTextWithComments) {
  RunConfig c;
  c.load_text("# experiment\nseed = 7\n\n  domain=time   # time only\nframework = traditional\nrf_bootstrap = no\n", "x.cfg");
  EXPECT_EQ(c.get_int("seed"), 7);
  EXPECT_EQ(c.domain(), FeatureDomain::Time);
  EXPECT_EQ(c.eval_settings().train.framework, Framework::Traditional);
  EXPECT_FALSE(c.get_bool("rf_bootstrap"));
  c.set_assignment("knn_k=3");
  EXPECT_EQ(c.eval_settings().train.params.knn_k, 3);
}

TEST(Config, ErrorsNameTheSourceLine) {
  RunConfig c;
  try {
    c.load_text("seed = 1\nbogus = 2\n", "run.cfg");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("run.cfg:2"), std::string::npos);
    EXPECT_NE(what.find("bogus"), std::string::npos);
  }
  EXPECT_THROW(c.load_text("seed\n", "a"), FormatError);
  EXPECT_THROW(c.set("knn_k", "0"), FormatError);
  EXPECT_THROW(c.set("svm_c", "ten"), FormatError);
  EXPECT_THROW(c.set("domain", "wavelet"), FormatError);
  EXPECT_THROW(c.set("first_layer", "boost"), FormatError);
  EXPECT_THROW(c.set("rf_bootstrap", "maybe"), FormatError);
  EXPECT_THROW(c.set_assignment("knn_k"), FormatError);
}

TEST(Config, FingerprintListsEveryKeySorted) {
  RunConfig c;
  c.set("svm_c", "2.5");
  const auto fp = c.fingerprint();
  EXPECT_EQ(fp.size(), RunConfig::defaults().size());
  EXPECT_EQ(fp["svm_c"], "2.5");
  std::string prev;
  for (const auto& [k, v] : fp.items()) {
    EXPECT_LT(prev, k);
    prev = k;
  }
  RunConfig d;
  d.set("svm_c", "2.5");
  EXPECT_EQ(d.fingerprint().dump(), fp.dump());
}
