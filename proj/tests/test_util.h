// Copyright 2026 The Batik KG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BATIK_TESTS_TEST_UTIL_H_
#define BATIK_TESTS_TEST_UTIL_H_

#include <functional>
#include <string>

#include <gtest/gtest.h>

#include "batik/core/error.h"
#include "batik/kg/ontology.h"

namespace batik::testing {

// Four concepts and nine relations, built in code so unit tests do not
// depend on the shipped data files.
inline kg::OntologySchema BatikSchema() {
  kg::OntologySchema s;
  s.AddConcept({"纹样", {"Pattern"}, ""});
  s.AddConcept({"寓意", {"Meaning"}, ""});
  s.AddConcept({"崇拜意识", {"Worship", "Worship Consciousness"}, ""});
  s.AddConcept({"原型来源", {"Source", "Prototype Source"}, ""});
  s.AddRelation({"蕴含", {"Mean"}, "纹样", "寓意"});
  s.AddRelation({"属于", {"Belong to"}, "纹样", "纹样"});
  s.AddRelation({"崇拜", {"Worship"}, "纹样", "崇拜意识"});
  s.AddRelation({"来源", {"Origin from", "来源于"}, "纹样", "原型来源"});
  s.AddRelation({"同义", {"Synonym"}, "纹样", "纹样"});
  s.AddRelation({"母子", {"Mother & child"}, "纹样", "纹样"});
  s.AddRelation({"父女", {"Father & daughter"}, "纹样", "纹样"});
  s.AddRelation({"父子", {"Father & son"}, "纹样", "纹样"});
  s.AddRelation({"兄弟姐妹", {"Sibling"}, "纹样", "纹样"});
  s.AddNormalization({"是", "纹样", "属于"});
  return s;
}

// Runs `fn` and returns the kind of the batik::Error it throws; fails the
// test if nothing or something else is thrown.
inline ErrorKind ThrownKind(const std::function<void()>& fn,
                            std::string* message = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  } catch (const std::exception& e) {
    ADD_FAILURE() << "unexpected exception: " << e.what();
    return ErrorKind::kInvalidArgument;
  }
  ADD_FAILURE() << "no exception thrown";
  return ErrorKind::kInvalidArgument;
}

}  // namespace batik::testing

#endif  // BATIK_TESTS_TEST_UTIL_H_
