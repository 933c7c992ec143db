#pragma once

// Small built-in sample sets mixed into the randomized suites.

#include <string>
#include <vector>

#include "structprov/ingest.hpp"

namespace structprov::harness {

struct CorpusEntry {
  std::string name;
  std::vector<DataValue> samples;
};

inline std::vector<CorpusEntry> builtin_corpus() {
  std::vector<CorpusEntry> out;
  DataValue people = parse_json(
      R"([ { "name":"Jan", "age":25 }, { "name":"Tomas" }, { "name":"Alexander", "age":3.5 } ])");
  out.push_back({"people", people.items()});
  out.push_back({"worldbank", {parse_json(R"([ { "pages": 5 },
      [ { "indicator": "GC.DOD.TOTL.GD.ZS", "date": "2012", "value": null },
        { "indicator": "GC.DOD.TOTL.GD.ZS", "date": "2010", "value": "35.14229" } ] ])")}});
  out.push_back({"doc", {parse_xml(R"(<doc>
      <heading>Working with JSON</heading>
      <p>Type providers make this easy.</p>
      <heading>Working with XML</heading>
      <p>Processing XML is as easy as JSON.</p>
      <image source="xml.png" />
    </doc>)")}});
  out.push_back({"root", {parse_xml("<root id=\"1\"><item>Hello!</item></root>")}});
  out.push_back({"air", {parse_csv("Ozone, Temp, Date, Autofilled\n41, 67, 2012-05-01, 0\n36.3, 72, 2012-05-02, 1\n"
                                   "12.1, 74, 3 kveten, 0\n17.5, #N/A, 2012-05-04, 0\n")}});
  out.push_back({"weather", {parse_json(R"({ "coord": { "lon": 14.42, "lat": 50.09 },
      "weather": [ { "id": 802, "main": "Clouds", "description": "scattered clouds" } ],
      "main": { "temp": 5, "pressure": 1010, "humidity": 100 },
      "wind": { "speed": 1.5 }, "sys": { "country": "CZ" }, "name": "Prague" })")}});
  return out;
}

}  // namespace structprov::harness
