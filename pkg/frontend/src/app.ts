import { ApiClient } from "./api";
import { Session } from "./state";
import { mountApp } from "./views";

const container = document.getElementById("app");
if (container) {
  const session = new Session(new ApiClient());
  mountApp(container, session);
  void session.start();
}
