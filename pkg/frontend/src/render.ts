// DOM rendering for the five views. Dumb by design: everything it draws
// comes from ViewState; every interaction dispatches one Dashboard action.

import { mapMarkers, type Card, type Dashboard, type MatchRow, type Tab } from "./state.js";
import { renderMapSvg } from "./map.js";

const TABS: Array<{ id: Tab; label: string }> = [
  { id: "needs", label: "Needs" },
  { id: "availabilities", label: "Availabilities" },
  { id: "matches", label: "Matches" },
  { id: "completed", label: "Completed" },
  { id: "new", label: "New" },
];

function esc(s: string): string {
  return s.replace(/[&<>"']/g, (c) => `&#${c.charCodeAt(0)};`);
}

function cardHtml(card: Card, selectable: boolean): string {
  const qty = Object.entries(card.quantities)
    .map(([r, n]) => `${esc(r)}: ${n}`)
    .join(", ");
  const details = [
    card.resources.length ? `<dt>resources</dt><dd>${esc(card.resources.join(", "))}</dd>` : "",
    qty ? `<dt>quantities</dt><dd>${qty}</dd>` : "",
    card.locations.length
      ? `<dt>location</dt><dd>${esc(card.locations.map((l) => l.canonical).join(", "))}</dd>`
      : "",
    card.sources.length ? `<dt>source</dt><dd>${esc(card.sources.join(", "))}</dd>` : "",
    card.contacts.length
      ? `<dt>contact</dt><dd>${esc(card.contacts.map((c) => c.value).join(", "))}</dd>`
      : "",
  ].join("");
  return `
    <article class="card ${card.matched ? "matched" : "unmatched"}" data-post="${esc(card.id)}">
      <p class="card-text">${esc(card.text)}</p>
      <dl class="card-details">${details}</dl>
      <footer>
        <span class="badge badge-${card.kind}">${card.kind}</span>
        <span class="badge badge-status">${card.status}</span>
        <time>${esc(card.createdAt)}</time>
        ${selectable ? `<button class="notch" data-select="${esc(card.id)}" title="more details / suggestions">&#9698;</button>` : ""}
      </footer>
    </article>`;
}

function matchRowHtml(row: MatchRow, completable: boolean): string {
  return `
    <article class="match-row" data-match="${esc(row.id)}">
      <div class="pair">
        <p class="need">${esc(row.needText)}</p>
        <p class="avail">${esc(row.availText)}</p>
      </div>
      <p class="match-meta">score ${row.score.toFixed(2)}
        ${row.commonResources.length ? ` &middot; common: ${esc(row.commonResources.join(", "))}` : ""}</p>
      ${
        completable
          ? `<button data-complete="${esc(row.id)}">Mark completed</button>
             <button data-discard="${esc(row.id)}" class="secondary">Discard</button>`
          : `<span class="badge badge-status">completed</span>`
      }
    </article>`;
}

function suggestionsHtml(dash: Dashboard): string {
  const { suggestions, suggestionCards, selectedPostId } = dash.state;
  if (!selectedPostId) return "";
  if (suggestions.length === 0) {
    return `<aside class="suggestions"><h3>Suggestions for ${esc(selectedPostId)}</h3>
      <p>No overlapping posts found.</p></aside>`;
  }
  const rows = suggestions
    .map((s, i) => {
      const card = suggestionCards[i];
      const target = dash.selectedPostKind() === "availability" ? s.need_id : s.avail_id;
      return `
      <li>
        <button data-confirm="${i}" title="confirm this match">match</button>
        <span class="score">${s.score.toFixed(2)}</span>
        <span class="common">[${esc(s.common.join(", "))}]</span>
        <span class="target">${card ? esc(card.text) : esc(target)}</span>
      </li>`;
    })
    .join("");
  return `<aside class="suggestions"><h3>Suggestions for ${esc(selectedPostId)}</h3><ol>${rows}</ol></aside>`;
}

function formHtml(dash: Dashboard): string {
  const form = dash.state.form;
  const kinds: Array<string> = ["need", "availability", "other"];
  const fields = form.parsed
    ? `
    <div class="parsed-fields">
      <label>Kind
        <select id="form-kind">${kinds
          .map((k) => `<option value="${k}" ${form.kind === k ? "selected" : ""}>${k}</option>`)
          .join("")}</select>
      </label>
      <label>Resources <input id="form-resources" value="${esc(form.resources.join(", "))}"/></label>
      <label>Quantities <input id="form-quantities" readonly value="${esc(
        Object.entries(form.quantities)
          .map(([r, n]) => `${r}=${n}`)
          .join(", "),
      )}"/></label>
      <label>Location <input id="form-locations" readonly value="${esc(
        form.locations.map((l) => l.canonical).join(", "),
      )}"/></label>
      <label>Source <input id="form-sources" value="${esc(form.sources.join(", "))}"/></label>
      <label>Contact <input id="form-contacts" readonly value="${esc(
        form.contacts.map((c) => c.value).join(", "),
      )}"/></label>
      <div class="mini-map">${renderMapSvg(form.locations)}</div>
    </div>`
    : "";
  return `
    <section class="new-post">
      <h2>New need / availability</h2>
      <textarea id="form-text" rows="3" placeholder="Paste the post text here">${esc(form.text)}</textarea>
      ${form.error ? `<p class="inline-error">${esc(form.error)}</p>` : ""}
      <div class="form-actions">
        <button id="form-parse">PARSE</button>
        <button id="form-save" ${form.parsed || form.text.trim() ? "" : "disabled"}>SAVE</button>
      </div>
      ${fields}
    </section>`;
}

export function render(root: HTMLElement, dash: Dashboard): void {
  const s = dash.state;
  const tabs = TABS.map(
    (t) =>
      `<button class="tab ${s.activeTab === t.id ? "active" : ""}" data-tab="${t.id}">${t.label}</button>`,
  ).join("");
  let body = "";
  if (s.activeTab === "needs" || s.activeTab === "availabilities") {
    const cards = s.activeTab === "needs" ? s.needs : s.availabilities;
    body = `<section class="cards">${cards.map((c) => cardHtml(c, true)).join("") || "<p>No posts.</p>"}</section>${suggestionsHtml(dash)}`;
  } else if (s.activeTab === "matches") {
    body = `<section class="matches">${s.matches.map((m) => matchRowHtml(m, true)).join("") || "<p>No active matches.</p>"}</section>`;
  } else if (s.activeTab === "completed") {
    body = `<section class="matches">${s.completed.map((m) => matchRowHtml(m, false)).join("") || "<p>Nothing completed yet.</p>"}</section>`;
  } else {
    body = formHtml(dash);
  }
  const markers = mapMarkers(s);
  root.innerHTML = `
    <header>
      <h1>Relief coordination</h1>
      <input id="search" type="search" placeholder="Search needs, availabilities and matches" value="${esc(s.searchQuery)}"/>
      <nav>${tabs}</nav>
    </header>
    ${s.banner ? `<div class="banner" role="alert">${esc(s.banner)} <button id="banner-close">&times;</button></div>` : ""}
    <main>${body}</main>
    <footer class="map-pane"><h3>Reported locations</h3>${renderMapSvg(markers)}</footer>
  `;
  wire(root, dash);
}

function wire(root: HTMLElement, dash: Dashboard): void {
  root.querySelectorAll<HTMLButtonElement>("[data-tab]").forEach((b) =>
    b.addEventListener("click", () => {
      dash.setTab(b.dataset.tab as Tab);
      window.location.hash = `#/${b.dataset.tab}`;
    }),
  );
  const search = root.querySelector<HTMLInputElement>("#search");
  search?.addEventListener("change", () => void dash.refresh(search.value));
  root.querySelector("#banner-close")?.addEventListener("click", () => dash.clearBanner());
  root.querySelectorAll<HTMLButtonElement>("[data-select]").forEach((b) =>
    b.addEventListener("click", () => void dash.selectPost(b.dataset.select!)),
  );
  root.querySelectorAll<HTMLButtonElement>("[data-confirm]").forEach((b) =>
    b.addEventListener("click", () => {
      const suggestion = dash.state.suggestions[Number(b.dataset.confirm)];
      if (suggestion) void dash.confirmSuggestion(suggestion);
    }),
  );
  root.querySelectorAll<HTMLButtonElement>("[data-complete]").forEach((b) =>
    b.addEventListener("click", () => void dash.completeMatch(b.dataset.complete!)),
  );
  root.querySelectorAll<HTMLButtonElement>("[data-discard]").forEach((b) =>
    b.addEventListener("click", () => void dash.discardMatch(b.dataset.discard!)),
  );
  const text = root.querySelector<HTMLTextAreaElement>("#form-text");
  text?.addEventListener("input", () => dash.setFormText(text.value));
  root.querySelector("#form-parse")?.addEventListener("click", () => void dash.parseForm());
  root.querySelector("#form-save")?.addEventListener("click", () => void dash.saveForm());
  const kind = root.querySelector<HTMLSelectElement>("#form-kind");
  kind?.addEventListener("change", () => dash.editFormKind(kind.value as never));
}
