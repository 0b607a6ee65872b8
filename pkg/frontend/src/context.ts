import type { ApiClient } from "./api.js";
import type { LatestGate } from "./latest.js";
import type { ViewState } from "./state.js";

/** What every view gets: the API client, navigation, and request gates. */
export interface AppContext {
  client: ApiClient;
  navigate(state: ViewState): void;
  rerender(): void;
  /** one in-flight list query at a time */
  listGate: LatestGate;
  /** one in-flight search at a time */
  searchGate: LatestGate;
}
