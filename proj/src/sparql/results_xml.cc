// Copyright 2026 The Semflow Authors.
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

#include "semflow/sparql/query.h"

#include <algorithm>

#include "semflow/base/error.h"
#include "semflow/base/xml.h"

namespace semflow::sparql {
namespace {

std::string binding_xml(const std::string &name, const Term &t) {
  std::string out = "      <binding name=\"" + xml::escape_attr(name) + "\">";
  if (t.is_iri()) {
    out += "<uri>" + xml::escape_text(t.value()) + "</uri>";
  } else {
    out += "<literal";
    if (!t.lang().empty()) {
      out += " xml:lang=\"" + xml::escape_attr(t.lang()) + "\"";
    } else if (!t.datatype().empty()) {
      out += " datatype=\"" + xml::escape_attr(t.datatype()) + "\"";
    }
    out += ">" + xml::escape_text(t.value()) + "</literal>";
  }
  out += "</binding>\n";
  return out;
}

std::string header() {
  return "<?xml version=\"1.0\"?>\n<sparql xmlns=\"" +
         std::string(kResultsNamespace) + "\">\n";
}

}  // namespace

std::string serialize_results_xml(const ResultSet &rs) {
  std::string out = header();
  out += "  <head>\n";
  for (const std::string &v : rs.variables) {
    out += "    <variable name=\"" + xml::escape_attr(v) + "\"/>\n";
  }
  out += "  </head>\n  <results>\n";
  for (const auto &row : rs.rows) {
    out += "    <result>\n";
    for (size_t i = 0; i < row.size() && i < rs.variables.size(); ++i) {
      if (row[i]) out += binding_xml(rs.variables[i], *row[i]);
    }
    out += "    </result>\n";
  }
  out += "  </results>\n</sparql>\n";
  return out;
}

ResultSet parse_results_xml(std::string_view text) {
  xml::Element root = xml::parse(text);
  auto fail = [](const std::string &why) -> void { throw Error("malformed-xml", why); };
  if (root.name != "sparql") fail("root element is " + root.name);
  const xml::Element *head = root.child("head");
  const xml::Element *results = root.child("results");
  if (!head || !results) fail("missing head or results");
  ResultSet rs;
  for (const xml::Element *v : head->children_named("variable")) {
    const std::string *name = v->attr("name");
    if (!name) fail("variable without name");
    rs.variables.push_back(*name);
  }
  for (const xml::Element *r : results->children_named("result")) {
    std::vector<std::optional<Term>> row(rs.variables.size());
    for (const xml::Element *b : r->children_named("binding")) {
      const std::string *name = b->attr("name");
      auto it = name ? std::find(rs.variables.begin(), rs.variables.end(), *name)
                     : rs.variables.end();
      if (it == rs.variables.end()) fail("binding for undeclared variable");
      if (b->children.size() != 1) fail("binding must hold one term");
      const xml::Element &t = b->children.front();
      try {
        if (t.name == "uri") {
          row[it - rs.variables.begin()] = Term::iri(t.text);
        } else if (t.name == "literal") {
          const std::string *lang = t.attr("xml:lang");
          const std::string *dt = t.attr("datatype");
          row[it - rs.variables.begin()] =
              Term::literal(t.text, dt ? *dt : "", lang ? *lang : "");
        } else {
          fail("unsupported term element " + t.name);
        }
      } catch (const Error &e) {
        if (e.code() == "malformed-xml") throw;
        fail(e.what());
      }
    }
    rs.rows.push_back(std::move(row));
  }
  return rs;
}

std::string serialize_boolean_xml(bool value) {
  return header() + "  <head/>\n  <boolean>" + (value ? "true" : "false") +
         "</boolean>\n</sparql>\n";
}

}  // namespace semflow::sparql
