// Regenerates data/atlases/*.geojson from the us-atlas TopoJSON package
// (Census cartographic boundaries, pre-projected Albers USA with AK/HI insets).
//
//   npm install us-atlas topojson-client
//   node tools/data/build_atlases.js node_modules data/atlases
"use strict";
const fs = require("fs");
const path = require("path");

const modules = process.argv[2] || "node_modules";
const outDir = process.argv[3] || "data/atlases";
const topo = require(path.resolve(modules, "topojson-client"));

const STATE_POSTAL = {
  "01": "AL", "02": "AK", "04": "AZ", "05": "AR", "06": "CA", "08": "CO", "09": "CT",
  "10": "DE", "11": "DC", "12": "FL", "13": "GA", "15": "HI", "16": "ID", "17": "IL",
  "18": "IN", "19": "IA", "20": "KS", "21": "KY", "22": "LA", "23": "ME", "24": "MD",
  "25": "MA", "26": "MI", "27": "MN", "28": "MS", "29": "MO", "30": "MT", "31": "NE",
  "32": "NV", "33": "NH", "34": "NJ", "35": "NM", "36": "NY", "37": "NC", "38": "ND",
  "39": "OH", "40": "OK", "41": "OR", "42": "PA", "44": "RI", "45": "SC", "46": "SD",
  "47": "TN", "48": "TX", "49": "UT", "50": "VT", "51": "VA", "53": "WA", "54": "WV",
  "55": "WI", "56": "WY",
};

function roundGeometry(geom, fn) {
  const ring = (r) => r.map(([x, y]) => fn(x, y));
  if (geom.type === "Polygon") return { type: "Polygon", coordinates: geom.coordinates.map(ring) };
  return { type: "MultiPolygon", coordinates: geom.coordinates.map((p) => p.map(ring)) };
}

function r2(v) { return Math.round(v * 100) / 100; }

function write(file, doc) {
  fs.writeFileSync(path.join(outDir, file), JSON.stringify(doc) + "\n");
}

// States + DC, already in a 975x610 screen frame (y down).
{
  const t = require(path.resolve(modules, "us-atlas/states-albers-10m.json"));
  const fc = topo.feature(t, t.objects.states);
  const nation = topo.feature(t, t.objects.nation);
  const pt = (x, y) => [r2(x), r2(y)];
  const features = fc.features
    .map((f) => ({
      type: "Feature",
      properties: { id: STATE_POSTAL[f.id], name: f.properties.name, fips: f.id },
      geometry: roundGeometry(f.geometry, pt),
    }))
    .sort((a, b) => a.properties.id.localeCompare(b.properties.id));
  write("us-states-dc.geojson", {
    type: "FeatureCollection",
    micromap: {
      coordinates: "planar",
      y_axis: "down",
      id_property: "id",
      name_property: "name",
      note: "Stylized Albers USA layout with Alaska and Hawaii insets (us-atlas states-albers-10m, US Census cartographic boundaries). Not geodetically accurate.",
    },
    outline: roundGeometry(nation.features[0].geometry, pt),
    features,
  });
}

// New York counties, re-framed so the state spans roughly 600 units.
{
  const t = require(path.resolve(modules, "us-atlas/counties-albers-10m.json"));
  const fc = topo.feature(t, t.objects.counties);
  const ny = fc.features.filter((f) => f.id.startsWith("36"));
  let minX = Infinity, minY = Infinity, maxX = -Infinity;
  for (const f of ny) {
    const polys = f.geometry.type === "Polygon" ? [f.geometry.coordinates] : f.geometry.coordinates;
    for (const p of polys) for (const r of p) for (const [x, y] of r) {
      minX = Math.min(minX, x); maxX = Math.max(maxX, x); minY = Math.min(minY, y);
    }
  }
  const k = 600 / (maxX - minX);
  const pt = (x, y) => [r2((x - minX) * k), r2((y - minY) * k)];
  const features = ny
    .map((f) => ({
      type: "Feature",
      properties: { id: f.id, name: f.properties.name, fips: f.id },
      geometry: roundGeometry(f.geometry, pt),
    }))
    .sort((a, b) => a.properties.id.localeCompare(b.properties.id));
  write("ny-counties.geojson", {
    type: "FeatureCollection",
    micromap: {
      coordinates: "planar",
      y_axis: "down",
      id_property: "id",
      name_property: "name",
      note: "New York State counties (us-atlas counties-albers-10m, US Census cartographic boundaries), rescaled.",
    },
    features,
  });
}
