// Static SVG map pane: plots verified-location markers on an
// equirectangular projection with a graticule. No tile fetches, no
// geocoding; coordinates come straight from the API.

import type { ApiLocation } from "./types.js";

const WIDTH = 360;
const HEIGHT = 200;

function project(lat: number, lon: number): { x: number; y: number } {
  return {
    x: ((lon + 180) / 360) * WIDTH,
    y: ((90 - lat) / 180) * HEIGHT,
  };
}

function viewBoxFor(markers: ApiLocation[]): string {
  if (markers.length === 0) return `0 0 ${WIDTH} ${HEIGHT}`;
  const points = markers.map((m) => project(m.lat, m.lon));
  const xs = points.map((p) => p.x);
  const ys = points.map((p) => p.y);
  const pad = 12;
  const x0 = Math.max(0, Math.min(...xs) - pad);
  const y0 = Math.max(0, Math.min(...ys) - pad);
  const x1 = Math.min(WIDTH, Math.max(...xs) + pad);
  const y1 = Math.min(HEIGHT, Math.max(...ys) + pad);
  return `${x0} ${y0} ${Math.max(x1 - x0, 24)} ${Math.max(y1 - y0, 24)}`;
}

export function renderMapSvg(markers: ApiLocation[]): string {
  const grid: string[] = [];
  for (let lon = -180; lon <= 180; lon += 30) {
    const { x } = project(0, lon);
    grid.push(`<line x1="${x}" y1="0" x2="${x}" y2="${HEIGHT}" class="grid"/>`);
  }
  for (let lat = -90; lat <= 90; lat += 30) {
    const { y } = project(lat, 0);
    grid.push(`<line x1="0" y1="${y}" x2="${WIDTH}" y2="${y}" class="grid"/>`);
  }
  const pins = markers
    .map((m) => {
      const { x, y } = project(m.lat, m.lon);
      return (
        `<circle cx="${x.toFixed(2)}" cy="${y.toFixed(2)}" r="2.5" class="pin"/>` +
        `<text x="${(x + 4).toFixed(2)}" y="${(y + 1).toFixed(2)}" class="pin-label">${m.canonical}</text>`
      );
    })
    .join("");
  return (
    `<svg viewBox="${viewBoxFor(markers)}" preserveAspectRatio="xMidYMid meet" role="img" aria-label="resource locations">` +
    `<rect x="0" y="0" width="${WIDTH}" height="${HEIGHT}" class="sea"/>` +
    grid.join("") +
    pins +
    `</svg>`
  );
}
