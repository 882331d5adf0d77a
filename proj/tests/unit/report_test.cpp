// Copyright (c) 2026, The augbias Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include "augbias/io.hpp"
#include "augbias/report.hpp"

namespace augbias {
namespace {

bool has(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

TEST(Report, InterventionRowShape) {
  InterventionResult r;
  for (int i = 0; i < 50; ++i) r.affected.push_back("c" + std::to_string(i));
  InterventionRow row{"standard, s=8%", uniform_policy(Strength(8)), {76.79, 0.04}, MeanSe{53.93, 0.12},
                      MeanSe{77.99, 0.05}};
  r.rows.push_back(row);
  const auto md = render_markdown(intervention_to_json(r));
  EXPECT_TRUE(has(md, "| standard, s=8% | 76.79 ± 0.04 | 53.93 ± 0.12 | 77.99 ± 0.05 |")) << md;
  EXPECT_TRUE(has(md, "avg acc of 50 affected"));
}

TEST(Report, ConfusionReportAlwaysHasFourSections) {
  ConfusionReport rep;
  for (auto c : kAllCategories) rep.category_counts[c] = 0;
  rep.entries.push_back(AffectedEntry{"k", 0.1, std::nullopt, {}});
  const auto md = render_markdown(confusion_report_to_json(rep));
  for (const char* title : {"## Ambiguous", "## Co-occurring", "## Fine-grained", "## Semantically unrelated"}) {
    EXPECT_TRUE(has(md, title)) << title;
  }
  EXPECT_TRUE(has(md, "No pairs."));
}

TEST(Report, ConfusionRowsLandInTheirSection) {
  ConfusionReport rep;
  for (auto c : kAllCategories) rep.category_counts[c] = 0;
  ConfusedPartner p;
  p.cls = "wok";
  p.delta_cr = 0.05;
  p.scores = {0.09, 0.1, 0.05, 0.92, 0.72};
  p.category = ConfusionCategory::fine_grained;
  rep.entries.push_back(AffectedEntry{"frying pan", 0.1, 0.08, {p}});
  rep.category_counts[ConfusionCategory::fine_grained] = 1;
  const auto md = render_markdown(confusion_report_to_json(rep));
  const auto fine = md.find("## Fine-grained");
  const auto row = md.find("| frying pan | wok |");
  ASSERT_NE(row, std::string::npos) << md;
  EXPECT_GT(row, fine);
  EXPECT_LT(row, md.find("## Semantically unrelated"));
}

TEST(Report, PolicyAndManifestFooterWithoutTimestamp) {
  AugPolicy p = uniform_policy(Strength(8));
  p.overrides["k"] = Strength(60);
  RunManifest m{"0.3.0", "abc", {{"in.json", "0123"}}, "augbias policy", "2026-01-01T00:00:00Z"};
  const auto md = render_markdown(policy_to_json(p, &m));
  EXPECT_TRUE(has(md, "| k | 60% |")) << md;
  EXPECT_TRUE(has(md, "augbias policy"));
  EXPECT_FALSE(has(md, "2026-01-01"));
}

TEST(Report, RejectsUnknownInput) {
  EXPECT_THROW(render_markdown("{}"), ValidationError);
  EXPECT_THROW(render_markdown("not json"), ValidationError);
  EXPECT_THROW(render_markdown(R"({"kind":"mystery"})"), ValidationError);
}

}  // namespace
}  // namespace augbias
