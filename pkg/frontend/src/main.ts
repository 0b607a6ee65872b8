import { ApiClient } from "./api.js";
import { boot } from "./app.js";

const root = document.getElementById("app");
if (root) {
  const client = new ApiClient({
    fetchImpl: (input, init) => window.fetch(input, init),
  });
  boot(root, client);
}
