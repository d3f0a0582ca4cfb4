// Dashboard view state and actions. Pure data + API calls, no DOM: the
// renderer subscribes and redraws, the tests drive actions directly.

import { ApiClient, ApiError } from "./api.js";
import type {
  ApiContact,
  ApiLocation,
  ApiMatch,
  ApiParseResult,
  ApiPost,
  ApiSuggestion,
  PostKind,
} from "./types.js";

export type Tab = "needs" | "availabilities" | "matches" | "completed" | "new";

export interface Card {
  id: string;
  text: string;
  kind: PostKind;
  status: string;
  matched: boolean; // rendered gray when true
  createdAt: string;
  resources: string[];
  quantities: Record<string, number>;
  locations: ApiLocation[];
  sources: string[];
  contacts: ApiContact[];
}

export interface MatchRow {
  id: string;
  score: number;
  status: string;
  needText: string;
  availText: string;
  needId: string;
  availId: string;
  commonResources: string[];
}

export interface NewPostForm {
  text: string;
  parsed: boolean;
  kind: PostKind | null;
  kindEdited: boolean;
  resources: string[];
  quantities: Record<string, number>;
  locations: ApiLocation[];
  sources: string[];
  contacts: ApiContact[];
  error: string | null;
}

const EMPTY_FORM: NewPostForm = {
  text: "",
  parsed: false,
  kind: null,
  kindEdited: false,
  resources: [],
  quantities: {},
  locations: [],
  sources: [],
  contacts: [],
  error: null,
};

export interface ViewState {
  activeTab: Tab;
  searchQuery: string;
  needs: Card[];
  availabilities: Card[];
  matches: MatchRow[];
  completed: MatchRow[];
  selectedPostId: string | null;
  suggestions: ApiSuggestion[];
  suggestionCards: Card[];
  banner: string | null;
  degraded: boolean; // showing cached page after an API failure
  form: NewPostForm;
}

export function toCard(post: ApiPost): Card {
  const ex = post.extraction;
  return {
    id: post.id,
    text: post.text_raw,
    kind: post.label,
    status: post.status,
    matched: post.status !== "active",
    createdAt: post.created_at,
    resources: ex?.resources ?? [],
    quantities: ex?.quantities ?? {},
    locations: ex?.locations ?? [],
    sources: ex?.sources ?? [],
    contacts: ex?.contacts ?? [],
  };
}

export function mapMarkers(state: ViewState): ApiLocation[] {
  const cards =
    state.activeTab === "new"
      ? []
      : state.activeTab === "needs"
        ? state.needs
        : state.activeTab === "availabilities"
          ? state.availabilities
          : [...state.needs, ...state.availabilities];
  const markers = cards.flatMap((c) => c.locations);
  if (state.form.parsed) markers.push(...state.form.locations);
  const seen = new Set<string>();
  return markers.filter((m) => {
    if (seen.has(m.canonical)) return false;
    seen.add(m.canonical);
    return true;
  });
}

export class Dashboard {
  readonly state: ViewState = {
    activeTab: "needs",
    searchQuery: "",
    needs: [],
    availabilities: [],
    matches: [],
    completed: [],
    selectedPostId: null,
    suggestions: [],
    suggestionCards: [],
    banner: null,
    degraded: false,
    form: { ...EMPTY_FORM },
  };

  private listeners: Array<() => void> = [];

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  private fail(err: unknown): void {
    const message =
      err instanceof ApiError
        ? err.status === 0
          ? `API unreachable (${err.detail}); showing last known data`
          : err.status === 409
            ? `Conflict: ${err.detail} — refresh and retry`
            : err.status === 422
              ? `Rejected: ${err.detail}`
              : `API error ${err.status}: ${err.detail}`
        : String(err);
    this.state.banner = message;
    this.state.degraded = err instanceof ApiError && err.status === 0;
    this.emit();
  }

  clearBanner(): void {
    this.state.banner = null;
    this.emit();
  }

  setTab(tab: Tab): void {
    this.state.activeTab = tab;
    this.emit();
  }

  /** One search box filters every tab at once (posts and matches). */
  async refresh(query?: string): Promise<void> {
    if (query !== undefined) this.state.searchQuery = query;
    const q = this.state.searchQuery.trim();
    try {
      const [needs, avails, matched, completed] = await Promise.all([
        this.api.listPosts({ kind: "need", q, limit: 200 }),
        this.api.listPosts({ kind: "availability", q, limit: 200 }),
        this.api.listMatches("matched"),
        this.api.listMatches("completed"),
      ]);
      this.state.needs = needs.items.map(toCard);
      this.state.availabilities = avails.items.map(toCard);
      const postText = new Map<string, ApiPost>();
      for (const page of [needs, avails]) {
        for (const post of page.items) postText.set(post.id, post);
      }
      this.state.matches = await this.matchRows(matched.items, postText, q);
      this.state.completed = await this.matchRows(completed.items, postText, q);
      this.state.banner = null;
      this.state.degraded = false;
    } catch (err) {
      this.fail(err); // cached cards stay on screen
      return;
    }
    this.emit();
  }

  private async matchRows(
    records: ApiMatch[],
    known: Map<string, ApiPost>,
    q: string,
  ): Promise<MatchRow[]> {
    const rows: MatchRow[] = [];
    for (const record of records) {
      const need = known.get(record.need_id) ?? (await this.api.getPost(record.need_id));
      const avail = known.get(record.avail_id) ?? (await this.api.getPost(record.avail_id));
      const needRes = new Set(need.extraction?.resources ?? []);
      const common = (avail.extraction?.resources ?? []).filter((r) => needRes.has(r));
      const row: MatchRow = {
        id: record.id,
        score: record.score,
        status: record.status,
        needText: need.text_raw,
        availText: avail.text_raw,
        needId: need.id,
        availId: avail.id,
        commonResources: common,
      };
      const haystack = `${row.needText} ${row.availText}`.toLowerCase();
      if (!q || haystack.includes(q.toLowerCase())) rows.push(row);
    }
    return rows;
  }

  selectedPostKind(): PostKind | "unknown" {
    const id = this.state.selectedPostId;
    if (!id) return "unknown";
    if (this.state.needs.some((c) => c.id === id)) return "need";
    if (this.state.availabilities.some((c) => c.id === id)) return "availability";
    return "unknown";
  }

  /** Selecting a need (or availability) loads its suggestion panel. */
  async selectPost(id: string): Promise<void> {
    this.state.selectedPostId = id;
    try {
      const { items } = await this.api.suggestions(id);
      this.state.suggestions = items;
      this.state.suggestionCards = [];
      for (const s of items) {
        const counterpart = this.selectedPostKind() === "availability" ? s.need_id : s.avail_id;
        this.state.suggestionCards.push(toCard(await this.api.getPost(counterpart)));
      }
      this.emit();
    } catch (err) {
      this.fail(err);
    }
  }

  async confirmSuggestion(suggestion: ApiSuggestion): Promise<ApiMatch | null> {
    try {
      const match = await this.api.createMatch(suggestion.need_id, suggestion.avail_id);
      await this.refresh();
      return match;
    } catch (err) {
      this.fail(err);
      await this.safeRefresh(); // reconcile optimistic UI with server truth
      return null;
    }
  }

  async completeMatch(matchId: string): Promise<boolean> {
    try {
      await this.api.completeMatch(matchId);
      await this.refresh();
      return true;
    } catch (err) {
      this.fail(err);
      await this.safeRefresh();
      return false;
    }
  }

  async discardMatch(matchId: string): Promise<boolean> {
    try {
      await this.api.discardMatch(matchId);
      await this.refresh();
      return true;
    } catch (err) {
      this.fail(err);
      await this.safeRefresh();
      return false;
    }
  }

  private async safeRefresh(): Promise<void> {
    try {
      await this.refresh();
    } catch {
      // banner already set by the failed action
    }
  }

  // -- new-post form -------------------------------------------------------

  setFormText(text: string): void {
    this.state.form.text = text;
    this.emit();
  }

  /** PARSE: fill the editable fields from the server, persisting nothing. */
  async parseForm(): Promise<ApiParseResult | null> {
    const text = this.state.form.text.trim();
    if (!text) {
      this.state.form.error = "Enter some text before parsing";
      this.emit();
      return null; // no request leaves the client
    }
    try {
      const parsed = await this.api.parse(this.state.form.text);
      this.state.form = {
        ...this.state.form,
        parsed: true,
        error: null,
        kind: parsed.kind,
        kindEdited: false,
        resources: [...parsed.extraction.resources],
        quantities: { ...parsed.extraction.quantities },
        locations: [...parsed.extraction.locations],
        sources: [...parsed.extraction.sources],
        contacts: [...parsed.extraction.contacts],
      };
      this.emit();
      return parsed;
    } catch (err) {
      this.fail(err);
      return null;
    }
  }

  editFormKind(kind: PostKind): void {
    this.state.form.kind = kind;
    this.state.form.kindEdited = true;
    this.emit();
  }

  /** SAVE: persist with whatever the human edited as overrides. */
  async saveForm(): Promise<ApiPost | null> {
    const form = this.state.form;
    if (!form.text.trim()) {
      form.error = "Enter some text before saving";
      this.emit();
      return null;
    }
    const overrides: Record<string, unknown> = {};
    if (form.kindEdited && form.kind) overrides.kind = form.kind;
    if (form.parsed) {
      overrides.resources = form.resources;
      overrides.quantities = form.quantities;
      overrides.locations = form.locations;
      overrides.sources = form.sources;
      overrides.contacts = form.contacts;
    }
    try {
      const post = await this.api.createPost(form.text, overrides);
      this.state.form = { ...EMPTY_FORM };
      await this.refresh(); // new post shows up immediately
      return post;
    } catch (err) {
      this.fail(err);
      return null;
    }
  }
}
